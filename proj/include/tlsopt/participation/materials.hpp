#pragma once

#include <json.hpp>

#include <array>
#include <string>
#include <vector>

namespace tlsopt {

enum class Interface { MS = 0, MA = 1, SA = 2 };

inline constexpr std::array<Interface, 3> kInterfaces{Interface::MS, Interface::MA, Interface::SA};

std::string to_string(Interface i);
Interface interface_from_string(const std::string& s);

struct MaterialLayer {
  Interface name = Interface::MS;
  double eps_r = 10.0;
  double thickness_nm = 3.0;
  double tan_delta = 0.0;

  double thickness_um() const { return thickness_nm * 1e-3; }
  void validate() const;
};

struct MaterialStack {
  std::string preset_name = "custom";
  double eps_substrate = 11.7;
  std::array<MaterialLayer, 3> layers{};  // indexed by Interface

  const MaterialLayer& layer(Interface i) const { return layers[static_cast<int>(i)]; }
  MaterialLayer& layer(Interface i) { return layers[static_cast<int>(i)]; }
  void validate() const;
};

/// "simplified": eps = 10, t = 3 nm on every layer, tan delta 1e-3.
/// "nb-on-si": niobium on silicon loss tangents and layer data.
MaterialStack material_preset(const std::string& name);
std::vector<std::string> material_preset_names();

nlohmann::json to_json(const MaterialStack& stack);
MaterialStack material_stack_from_json(const nlohmann::json& j);

}  // namespace tlsopt
