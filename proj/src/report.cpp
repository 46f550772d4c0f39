#include "resbif/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "resbif/error.hpp"

namespace resbif::report {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvTable::add(std::vector<double> key, std::vector<std::string> cells) {
  rows_.push_back({std::move(key), std::move(cells)});
}

std::string CsvTable::str() const {
  std::vector<const Row*> order;
  for (const auto& r : rows_) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(), [](const Row* a, const Row* b) { return a->key < b->key; });
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const Row* r : order) line(r->cells);
  return out;
}

nlohmann::json meta(const PotentialSpec& spec, const ode::Tolerance& tol, const nlohmann::json& extra) {
  nlohmann::json m;
  m["tool"] = "resbif";
  m["version"] = kToolVersion;
  m["potential"] = potential_to_json(spec);
  m["descriptor_hash"] = descriptor_hash(spec);
  m["tolerances"] = {{"rtol", tol.rtol}, {"atol", tol.atol}};
  if (extra.is_object())
    for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
  return m;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Config, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(ErrorKind::Config, "write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

void write_csv(const std::filesystem::path& path, const CsvTable& table, const nlohmann::json& meta_block) {
  write_text(path, table.str());
  write_json(path.string() + ".meta.json", meta_block);
}

CsvTable scatter_table(const std::vector<ScatteringData>& rows) {
  CsvTable t({"k_re", "k_im", "w_re", "w_im", "s_minus_re", "s_minus_im", "s_plus_re", "s_plus_im", "t_re", "t_im",
              "r_minus_re", "r_minus_im", "r_plus_re", "r_plus_im", "unitarity_dev"});
  for (const auto& d : rows) {
    const double dev = d.coefficients_defined ? std::abs(std::norm(d.r_minus) + std::norm(d.t) - 1.0)
                                              : std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> c;
    for (cplx z : {d.k, d.w, d.s_minus, d.s_plus, d.t, d.r_minus, d.r_plus}) {
      c.push_back(fmt(z.real()));
      c.push_back(fmt(z.imag()));
    }
    c.push_back(fmt(dev));
    t.add({d.k.real(), d.k.imag()}, std::move(c));
  }
  return t;
}

nlohmann::json spectral_point_json(const SpectralPoint& p) {
  nlohmann::json j;
  j["k_re"] = p.k_star.real();
  j["k_im"] = p.k_star.imag();
  j["target"] = to_string(p.target);
  j["class"] = to_string(p.cls);
  j["residual"] = p.residual;
  j["scale"] = p.scale;
  j["derivative_abs"] = p.derivative_abs;
  j["converged"] = p.converged;
  j["simple"] = p.simple;
  j["parity"] = to_string(p.parity);
  if (p.mode) {
    j["mode"] = {{"U_minus_b", p.mode->U_at_minus_b},
                 {"U_plus_b", p.mode->U_at_plus_b},
                 {"int_U2", p.mode->int_U2},
                 {"int_U4", p.mode->int_U4}};
    j["nondegeneracy"] = p.nondegeneracy;
    j["degenerate"] = p.degenerate;
  }
  return j;
}

CsvTable branch_table(const std::vector<std::pair<std::string, const BranchCurve*>>& curves,
                      const PotentialSpec& spec) {
  CsvTable t({"branch_id", "seed_class", "k_star_im", "E", "eps", "N", "H1", "x_L", "x_R", "sign_L", "sign_R",
              "residual"});
  for (std::size_t b = 0; b < curves.size(); ++b) {
    const auto& [id, curve] = curves[b];
    for (std::size_t i = 0; i < curve->points.size(); ++i) {
      const GluedState& g = curve->points[i];
      const GlobalResidual r = global_residual(spec, g);
      t.add({static_cast<double>(b), static_cast<double>(i)},
            {id, to_string(curve->seed.cls), fmt(curve->seed.kappa()), fmt(g.E), fmt(g.eps), fmt(g.N), fmt(g.H1),
             fmt(g.x_L), fmt(g.x_R), std::to_string(g.sign_L), std::to_string(g.sign_R), fmt(r.relative())});
    }
  }
  return t;
}

}  // namespace resbif::report
