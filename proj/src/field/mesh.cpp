#include "tlsopt/field/mesh.hpp"

#include "tlsopt/error.hpp"
#include "tlsopt/geometry/polygon_ops.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace tlsopt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Band {
  PolygonSet region;
  double inner = 0.0;
  double outer = kInf;
  double cell = 0.0;
};

bool convex(const Ring& r) {
  const std::size_t n = r.size();
  for (std::size_t i = 0; i < n; ++i)
    if (cross2<double>(r[(i + 1) % n] - r[i], r[(i + 2) % n] - r[(i + 1) % n]) < -1e-12) return false;
  return true;
}

// Ear-clipping diagonals of a simple counter-clockwise ring.
std::vector<std::pair<Point2d, Point2d>> ear_diagonals(const Ring& ring) {
  std::vector<std::pair<Point2d, Point2d>> out;
  std::vector<Point2d> v = ring;
  if (signed_area(v) < 0) std::reverse(v.begin(), v.end());
  const auto inside_tri = [](const Point2d& p, const Point2d& a, const Point2d& b, const Point2d& c) {
    return cross2<double>(b - a, p - a) > 0 && cross2<double>(c - b, p - b) > 0 && cross2<double>(a - c, p - c) > 0;
  };
  std::size_t guard = 0;
  while (v.size() > 3 && guard++ < 4 * ring.size() * ring.size()) {
    bool clipped = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Point2d& a = v[(i + v.size() - 1) % v.size()];
      const Point2d& b = v[i];
      const Point2d& c = v[(i + 1) % v.size()];
      if (cross2<double>(b - a, c - b) <= 0) continue;
      bool ear = true;
      for (const auto& q : v)
        if (q != a && q != b && q != c && inside_tri(q, a, b, c)) {
          ear = false;
          break;
        }
      if (!ear) continue;
      out.emplace_back(a, c);
      v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped) break;
  }
  return out;
}

// A point well inside the polygon, close to the centroid when possible.
Point2d interior_point(const Polygon& poly, const Point2d& c) {
  if (convex(poly.outer)) return c;
  const double a = area(poly);
  const double per = perimeter(poly.outer);
  if (contains(poly, c) && distance_to_boundary(poly, c) >= 0.5 * a / per) return c;

  // candidates: diagonal midpoints and ear-triangle centroids
  std::vector<Point2d> cand;
  for (const auto& [p, q] : ear_diagonals(poly.outer)) cand.push_back(0.5 * (p + q));
  const std::size_t n = poly.outer.size();
  for (std::size_t i = 0; i < n; ++i)
    cand.push_back((poly.outer[(i + n - 1) % n] + poly.outer[i] + poly.outer[(i + 1) % n]) / 3.0);
  Point2d best = c;
  double dmax = 0.0;
  std::vector<std::pair<Point2d, double>> scored;
  for (const auto& p : cand) {
    if (!contains(poly, p)) continue;
    const double d = distance_to_boundary(poly, p);
    scored.emplace_back(p, d);
    dmax = std::max(dmax, d);
  }
  double best_r = kInf;
  for (const auto& [p, d] : scored)
    if (d >= 0.9 * dmax && (p - c).norm() < best_r) {
      best_r = (p - c).norm();
      best = p;
    }
  return best;
}

void split_holes(const Polygon& piece, const Box2& cell, int depth, std::vector<Polygon>& out) {
  if (piece.holes.empty() || depth > 8) {
    out.push_back(piece);
    return;
  }
  const Point2d m = cell.center();
  const Box2 quads[4] = {{cell.min, m},
                         {Point2d(m.x(), cell.min.y()), Point2d(cell.max.x(), m.y())},
                         {Point2d(cell.min.x(), m.y()), Point2d(m.x(), cell.max.y())},
                         {m, cell.max}};
  for (const auto& q : quads)
    for (const auto& sub : polygon_intersection(PolygonSet{piece}, q)) split_holes(sub, q, depth + 1, out);
}

std::vector<Polygon> cut_region(const PolygonSet& region, double cell, const Point2d& origin) {
  std::vector<Polygon> out;
  if (region.empty()) return out;
  const Box2 box = bounding_box(region);
  const auto lo = [&](double v, double o) { return static_cast<long>(std::floor((v - o) / cell)); };
  const auto hi = [&](double v, double o) { return static_cast<long>(std::ceil((v - o) / cell)); };
  for (long i = lo(box.min.x(), origin.x()); i < hi(box.max.x(), origin.x()); ++i) {
    const double x0 = origin.x() + i * cell;
    const double x1 = x0 + cell;
    const Box2 column{Point2d(x0, box.min.y() - 1.0), Point2d(x1, box.max.y() + 1.0)};
    const PolygonSet strip = polygon_intersection(region, column);
    if (strip.empty()) continue;
    const Box2 sb = bounding_box(strip);
    for (long j = lo(sb.min.y(), origin.y()); j < hi(sb.max.y(), origin.y()); ++j) {
      const double y0 = origin.y() + j * cell;
      const Box2 c{Point2d(x0, y0), Point2d(x1, y0 + cell)};
      for (const auto& piece : polygon_intersection(strip, c)) split_holes(piece, c, 0, out);
    }
  }
  return out;
}

// Folds pieces much smaller than a regular cell into the neighbour they share
// the longest boundary with.
void merge_slivers(std::vector<Polygon>& pieces, double expected_area, double fraction) {
  const double threshold = fraction * expected_area;
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (area(pieces[i]) >= threshold || pieces.size() < 2) continue;
      const Box2 bi = bounding_box(pieces[i].outer);
      const double pi = perimeter(pieces[i].outer);
      double best_shared = 1e-9;
      std::size_t best = pieces.size();
      Polygon best_union;
      for (std::size_t j = 0; j < pieces.size(); ++j) {
        if (j == i) continue;
        const Box2 bj = bounding_box(pieces[j].outer);
        if (bj.min.x() > bi.max.x() + 1e-6 || bj.max.x() < bi.min.x() - 1e-6 || bj.min.y() > bi.max.y() + 1e-6 ||
            bj.max.y() < bi.min.y() - 1e-6)
          continue;
        const PolygonSet u = polygon_union(PolygonSet{pieces[i]}, PolygonSet{pieces[j]});
        if (u.size() != 1 || !u.front().holes.empty()) continue;
        const double shared = 0.5 * (pi + perimeter(pieces[j].outer) - perimeter(u.front().outer));
        if (shared > best_shared) {
          best_shared = shared;
          best = j;
          best_union = u.front();
        }
      }
      if (best == pieces.size()) continue;
      best_union.outer = simplify_ring(best_union.outer, 1e-9);
      pieces[best] = std::move(best_union);
      pieces.erase(pieces.begin() + static_cast<std::ptrdiff_t>(i));
      merged = true;
      break;
    }
  }
}

PolygonSet fill_holes(const PolygonSet& set) {
  PolygonSet out;
  for (const auto& p : set)
    for (const auto& h : p.holes) {
      Polygon solid{h, {}};
      orient(solid);
      out.push_back(std::move(solid));
    }
  return out;
}

double cell_size(const MeshConfig& cfg, double outer) {
  const double s = cfg.level_scale();
  const double target = cfg.target_panel_size * s;
  const double edge = std::min(cfg.edge_panel_length * s, target);
  if (!std::isfinite(outer)) return target;
  return std::clamp(cfg.cut_factor * outer, edge, target);
}

// Bands of a region graded by distance from `source` (which lies outside the
// region). With `erode` the region itself is the source: distance is measured
// inward from its own boundary.
std::vector<Band> graded_bands(const PolygonSet& region, const PolygonSet& source, bool erode,
                               const MeshConfig& cfg) {
  const std::vector<double> d = band_distances(cfg);
  std::vector<Band> bands;
  if (!erode && source.empty()) {
    bands.push_back({region, kInf, kInf, cell_size(cfg, kInf)});
    return bands;
  }
  PolygonSet prev = erode ? region : source;
  for (std::size_t k = 0; k + 1 < d.size(); ++k) {
    PolygonSet next = erode ? offset_polygon(region, -d[k + 1]) : offset_polygon(source, d[k + 1]);
    PolygonSet band = erode ? polygon_difference(prev, next)
                            : polygon_intersection(region, polygon_difference(next, prev));
    bands.push_back({std::move(band), d[k], d[k + 1], cell_size(cfg, d[k + 1])});
    prev = std::move(next);
    if (erode && prev.empty()) return bands;
  }
  PolygonSet rest = erode ? prev : polygon_difference(region, prev);
  bands.push_back({std::move(rest), d.back(), kInf, cell_size(cfg, kInf)});
  return bands;
}

void emit_bands(const std::vector<Band>& bands, int conductor, const MeshConfig& cfg, std::vector<Panel>& out) {
  for (const auto& band : bands) {
    if (band.region.empty()) continue;
    std::vector<Polygon> pieces = cut_region(band.region, band.cell, cfg.grid_origin);
    const double width = std::isfinite(band.outer) ? band.outer - band.inner : band.cell;
    const double expected = std::min(width, band.cell) * band.cell;
    merge_slivers(pieces, expected, 0.2);
    const double tol = cfg.simplify_fraction * std::min(width, band.cell);
    for (auto& piece : pieces) {
      if (area(piece) <= 1e-12 * band.cell * band.cell) continue;
      if (piece.outer.size() > 8) piece = simplify_polygon(piece, tol);
      piece.outer = simplify_ring(piece.outer, 1e-10);
      if (piece.outer.size() < 3) continue;
      out.push_back(make_panel(std::move(piece), conductor, band.inner, band.outer));
    }
  }
}

void check_conductor(const Conductor& c) {
  if (c.shape.empty()) throw MeshError("conductor '" + c.name + "' has no polygons");
  for (const auto& p : c.shape) {
    std::string why;
    if (!is_simple_polygon(p, &why)) throw MeshError("conductor '" + c.name + "' is degenerate: " + why);
    if (area(p) <= 0.0) throw MeshError("conductor '" + c.name + "' has zero area");
  }
}

}  // namespace

double MeshConfig::level_scale() const { return std::pow(refinement_ratio, refinement_level); }

MeshConfig MeshConfig::refined(int levels) const {
  MeshConfig c = *this;
  c.refinement_level += levels;
  return c;
}

void MeshConfig::validate() const {
  if (!(target_panel_size > 0.0)) throw ConfigError("target_panel_size must be > 0");
  if (edge_band < 0.0) throw ConfigError("edge_band must be >= 0");
  if (edge_band > 0.25 * region_scale) throw ConfigError("edge_band must not exceed x0/4");
  if (!(region_scale > 0.0)) throw ConfigError("region_scale must be > 0");
  if (!(edge_panel_length > 0.0)) throw ConfigError("edge_panel_length must be > 0");
  if (!(band_growth > 1.0)) throw ConfigError("band_growth must be > 1");
  if (!(refinement_ratio > 0.0 && refinement_ratio <= 1.0)) throw ConfigError("refinement_ratio must be in (0, 1]");
  if (refinement_level < 0) throw ConfigError("refinement_level must be >= 0");
}

std::vector<double> band_distances(const MeshConfig& cfg) {
  std::vector<double> d{0.0};
  if (cfg.edge_band <= 0.0) return d;
  const double x0 = cfg.region_scale;
  const int half = static_cast<int>(std::ceil(0.5 * x0 / cfg.edge_band - 1e-9));
  const double w = 0.5 * x0 / half;
  for (int i = 1; i <= 2 * half; ++i) d.push_back(i * w);
  const double stop = 0.5 * cfg.target_panel_size * cfg.level_scale();
  while (d.back() < stop) d.push_back(d.back() * cfg.band_growth);
  return d;
}

double Panel::aspect_ratio() const {
  Eigen::Matrix2d inertia;
  inertia << moments.ixx, moments.ixy, moments.ixy, moments.iyy;
  const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(inertia).eigenvalues();
  return ev(0) > 0 ? std::sqrt(ev(1) / ev(0)) : kInf;
}

Panel make_panel(Polygon shape, int conductor, double band_inner, double band_outer) {
  orient(shape);
  Panel p;
  p.moments = kernel::moments(shape.outer);
  double r = 0.0;
  for (const auto& v : shape.outer) r = std::max(r, (v - p.moments.centroid).norm());
  p.diameter = 2.0 * r;
  p.collocation = interior_point(shape, p.moments.centroid);
  p.conductor = conductor;
  p.band_inner = band_inner;
  p.band_outer = band_outer;
  p.shape = std::move(shape);
  return p;
}

double PanelMesh::area(int conductor) const {
  double a = 0.0;
  for (const auto& p : panels)
    if (p.conductor == conductor) a += p.area();
  return a;
}

PanelMesh mesh_conductors(const Layout& layout, const MeshConfig& config) {
  config.validate();
  PanelMesh mesh;
  mesh.refinement_level = config.refinement_level;
  for (std::size_t k = 0; k < layout.conductors.size(); ++k) {
    const Conductor& c = layout.conductors[k];
    check_conductor(c);
    mesh.conductor_names.push_back(c.name);
    const bool graded = config.edge_band > 0.0;
    std::vector<Band> bands;
    if (!graded)
      bands.push_back({c.shape, kInf, kInf, cell_size(config, kInf)});
    else if (c.outer_is_edge)
      bands = graded_bands(c.shape, {}, true, config);
    else
      bands = graded_bands(c.shape, fill_holes(c.shape), false, config);
    emit_bands(bands, static_cast<int>(k), config, mesh.panels);
  }
  if (mesh.panels.empty()) throw MeshError("mesh has no panels");
  return mesh;
}

PanelMesh mesh_conductors(const std::vector<PolygonSet>& conductors, const MeshConfig& config) {
  Layout layout;
  layout.kind = "custom";
  for (std::size_t k = 0; k < conductors.size(); ++k)
    layout.conductors.push_back({"c" + std::to_string(k), ConductorRole::PadPlus, conductors[k], true});
  return mesh_conductors(layout, config);
}

PanelMesh mesh_gap_region(const Layout& layout, const MeshConfig& config) {
  config.validate();
  PanelMesh mesh;
  mesh.refinement_level = config.refinement_level;
  if (layout.gap_domain.empty()) return mesh;
  const Box2& g = layout.gap_domain;
  const PolygonSet metal = layout.metal();
  const PolygonSet region =
      polygon_difference(PolygonSet{rectangle(g.min.x(), g.min.y(), g.max.x(), g.max.y())}, metal);
  std::vector<Band> bands;
  if (config.edge_band > 0.0)
    bands = graded_bands(region, metal, false, config);
  else
    bands.push_back({region, kInf, kInf, cell_size(config, kInf)});
  emit_bands(bands, -1, config, mesh.panels);
  return mesh;
}

nlohmann::json to_json(const PanelMesh& mesh) {
  nlohmann::json panels = nlohmann::json::array();
  const auto num = [](double v) -> nlohmann::json { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
  for (const auto& p : mesh.panels) {
    nlohmann::json ring = nlohmann::json::array();
    for (const auto& v : p.shape.outer) ring.push_back({v.x(), v.y()});
    panels.push_back({{"conductor", p.conductor},
                      {"area", p.area()},
                      {"centroid", {p.centroid().x(), p.centroid().y()}},
                      {"collocation", {p.collocation.x(), p.collocation.y()}},
                      {"band", {num(p.band_inner), num(p.band_outer)}},
                      {"outline", ring}});
  }
  return {{"refinement_level", mesh.refinement_level}, {"conductors", mesh.conductor_names}, {"panels", panels}};
}

PanelMesh mesh_from_json(const nlohmann::json& j) {
  PanelMesh mesh;
  try {
    mesh.refinement_level = j.at("refinement_level").get<int>();
    mesh.conductor_names = j.at("conductors").get<std::vector<std::string>>();
    const auto num = [](const nlohmann::json& v) { return v.is_null() ? kInf : v.get<double>(); };
    for (const auto& jp : j.at("panels")) {
      Polygon shape;
      for (const auto& v : jp.at("outline")) shape.outer.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
      Panel p = make_panel(std::move(shape), jp.at("conductor").get<int>(), num(jp.at("band").at(0)),
                           num(jp.at("band").at(1)));
      p.collocation = Point2d(jp.at("collocation").at(0).get<double>(), jp.at("collocation").at(1).get<double>());
      mesh.panels.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed mesh file: ") + e.what());
  }
  return mesh;
}

}  // namespace tlsopt
