#pragma once

#include "tlsopt/field/kernel.hpp"
#include "tlsopt/geometry/layout.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace tlsopt {

/// Panel sizes in µm. Panels next to graded edges are cut into bands whose
/// boundaries fall on 0.5 x0 and x0, so every panel lies wholly inside one
/// edge-distance region.
struct MeshConfig {
  double target_panel_size = 60.0;  // interior cell size
  double edge_band = 0.25;          // finest band width; 0 disables grading
  double region_scale = 1.0;        // x0
  double edge_panel_length = 40.0;  // along-edge length of panels within x0
  double band_growth = 2.0;         // distance ratio of successive bands beyond x0
  double cut_factor = 4.0;          // band cell = clamp(cut_factor * outer distance, edge length, target)
  int refinement_level = 0;
  double refinement_ratio = 0.7;  // panel lengths shrink by this per level
  double simplify_fraction = 0.02;
  Point2d grid_origin = Point2d::Zero();

  double level_scale() const;
  MeshConfig refined(int levels = 1) const;
  void validate() const;
};

struct Panel {
  Polygon shape;  // simple, no holes
  kernel::Moments moments;
  Point2d collocation = Point2d::Zero();
  double diameter = 0.0;
  int conductor = 0;
  // Distance range from the nearest graded metal edge; the outermost region
  // has band_outer = infinity.
  double band_inner = 0.0;
  double band_outer = 0.0;

  double area() const { return moments.area; }
  const Point2d& centroid() const { return moments.centroid; }
  double aspect_ratio() const;
};

Panel make_panel(Polygon shape, int conductor, double band_inner, double band_outer);

struct PanelMesh {
  std::vector<Panel> panels;
  std::vector<std::string> conductor_names;
  int refinement_level = 0;

  std::size_t size() const { return panels.size(); }
  int conductor_count() const { return static_cast<int>(conductor_names.size()); }
  double area(int conductor) const;
};

/// Meshes every conductor of the layout. Conductors whose outer boundary is
/// an artificial truncation are graded from their holes only.
PanelMesh mesh_conductors(const Layout& layout, const MeshConfig& config);
/// Plain form: each polygon set is one conductor with all edges graded.
PanelMesh mesh_conductors(const std::vector<PolygonSet>& conductors, const MeshConfig& config);

/// Sample cells covering the exposed substrate (gap domain minus metal),
/// graded by distance from the nearest metal edge. Empty when the layout has
/// no gap domain. Cells carry conductor = -1.
PanelMesh mesh_gap_region(const Layout& layout, const MeshConfig& config);

/// Band boundary distances used by the mesher; the last entry starts the
/// ungraded interior.
std::vector<double> band_distances(const MeshConfig& config);

nlohmann::json to_json(const PanelMesh& mesh);
PanelMesh mesh_from_json(const nlohmann::json& j);

}  // namespace tlsopt
