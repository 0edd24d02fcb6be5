#include "g2strom/field_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

namespace g2strom {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key, const std::string& loc) {
  if (!j.is_object() || !j.contains(key))
    throw IoError("missing required key '" + std::string(key) + "'", loc);
  return j.at(key);
}

int require_int(const json& j, const char* key, const std::string& loc) {
  const json& v = require(j, key, loc);
  if (!v.is_number_integer()) throw IoError("expected an integer", loc + "/" + key);
  return v.get<int>();
}

} // namespace

json field_to_json(const FourierField& f) {
  json j;
  j["degree"] = f.degree();
  j["cutoff"] = f.cutoff();
  j["lie"] = f.lie_valued() ? json{{"name", f.lie_name()}} : json(nullptr);
  json coeffs = json::array();
  for (const auto& [k, c] : f.coeffs()) {
    json entry;
    entry["k"] = std::vector<int>(k.begin(), k.end());
    json terms = json::array();
    for (int row = 0; row < c.rows(); ++row) {
      for (int col = 0; col < c.cols(); ++col) {
        Complexd z = c(row, col);
        if (z == Complexd(0.0, 0.0)) continue;
        json term;
        const MultiIndex& idx = MultiIndex::at(f.degree(), row);
        term["idx"] = idx.indices();
        term["re"] = z.real();
        term["im"] = z.imag();
        if (f.lie_valued()) {
          std::vector<double> lie(static_cast<size_t>(f.lie_dim()), 0.0);
          lie[static_cast<size_t>(col)] = 1.0;
          term["lie"] = lie;
        }
        terms.push_back(term);
      }
    }
    entry["terms"] = terms;
    coeffs.push_back(entry);
  }
  j["coeffs"] = coeffs;
  return j;
}

FourierField field_from_json(const json& j, const std::string& loc) {
  int degree = require_int(j, "degree", loc);
  if (degree < 0 || degree > 7) throw IoError("degree must be in 0..7", loc + "/degree");
  int cutoff = require_int(j, "cutoff", loc);
  if (cutoff < 0) throw IoError("cutoff must be >= 0", loc + "/cutoff");

  int lie_dim = 0;
  std::string lie_name;
  const json& lie = require(j, "lie", loc);
  if (!lie.is_null()) {
    if (!lie.is_object() || !lie.contains("name"))
      throw IoError("lie must be null or an object with a name", loc + "/lie");
    lie_name = lie.at("name").get<std::string>();
    lie_dim = LieAlgebraConfig::by_name(lie_name).dim();
  }

  FourierField f(degree, cutoff, lie_dim, lie_name);
  const json& coeffs = require(j, "coeffs", loc);
  if (!coeffs.is_array()) throw IoError("coeffs must be an array", loc + "/coeffs");
  for (size_t ci = 0; ci < coeffs.size(); ++ci) {
    std::string cloc = loc + "/coeffs/" + std::to_string(ci);
    const json& entry = coeffs.at(ci);
    const json& kj = require(entry, "k", cloc);
    if (!kj.is_array() || kj.size() != 7) throw IoError("k must have 7 entries", cloc + "/k");
    Wavevector k{};
    for (int i = 0; i < 7; ++i) {
      if (!kj.at(static_cast<size_t>(i)).is_number_integer())
        throw IoError("k entries must be integers", cloc + "/k/" + std::to_string(i));
      k[static_cast<size_t>(i)] = kj.at(static_cast<size_t>(i)).get<int>();
    }
    if (infnorm(k) > cutoff) throw IoError("wavevector exceeds cutoff", cloc + "/k");

    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(form_dim(degree), lie_dim > 0 ? lie_dim : 1);
    const json& terms = require(entry, "terms", cloc);
    if (!terms.is_array()) throw IoError("terms must be an array", cloc + "/terms");
    for (size_t ti = 0; ti < terms.size(); ++ti) {
      std::string tloc = cloc + "/terms/" + std::to_string(ti);
      const json& term = terms.at(ti);
      const json& idxj = require(term, "idx", tloc);
      if (!idxj.is_array() || static_cast<int>(idxj.size()) != degree)
        throw IoError("idx must list exactly degree indices", tloc + "/idx");
      std::vector<int> idx;
      for (const auto& v : idxj) {
        if (!v.is_number_integer()) throw IoError("idx entries must be integers", tloc + "/idx");
        idx.push_back(v.get<int>());
      }
      int row;
      try {
        row = MultiIndex(idx).position();
      } catch (const DegreeError& e) {
        throw IoError(e.what(), tloc + "/idx");
      }
      const json& rej = require(term, "re", tloc);
      const json& imj = require(term, "im", tloc);
      if (!rej.is_number() || !imj.is_number())
        throw IoError("re and im must be numbers", tloc);
      Complexd z(rej.get<double>(), imj.get<double>());
      if (term.contains("lie") && !term.at("lie").is_null()) {
        if (lie_dim == 0) throw IoError("lie weights on a plain field", tloc + "/lie");
        const json& lw = term.at("lie");
        if (!lw.is_array() || static_cast<int>(lw.size()) != lie_dim)
          throw IoError("lie weights must match the algebra dimension", tloc + "/lie");
        for (int a = 0; a < lie_dim; ++a)
          c(row, a) += z * lw.at(static_cast<size_t>(a)).get<double>();
      } else {
        if (lie_dim > 0) throw IoError("Lie-valued field term needs lie weights", tloc);
        c(row, 0) += z;
      }
    }
    f.add_coeff(k, c);
  }
  if (f.reality_residual() > 1e-9 * std::max(1.0, f.max_coeff_norm()))
    throw IoError("field violates the reality constraint coeff(-k) = conj(coeff(k))",
                  loc + "/coeffs");
  return f;
}

void save_field(const FourierField& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << field_to_json(f).dump(2) << "\n";
}

FourierField load_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw IoError(std::string("malformed JSON: ") + e.what(), path);
  }
  return field_from_json(j, "");
}

json algebroid_to_json(const AlgebroidData& alg) {
  json j;
  j["lie"] = {{"name", alg.lie().name()}, {"alpha_prime", alg.lie().alpha_prime()}};
  j["H0"] = field_to_json(alg.H0());
  j["theta0_a"] = field_to_json(alg.theta0().a);
  return j;
}

AlgebroidData algebroid_from_json(const json& j) {
  const json& lie_j = require(j, "lie", "");
  std::string name = require(lie_j, "name", "/lie").get<std::string>();
  double alpha = lie_j.contains("alpha_prime") ? lie_j.at("alpha_prime").get<double>() : 1.0;
  LieAlgebraConfig lie = LieAlgebraConfig::by_name(name, alpha);
  FourierField H0 = field_from_json(require(j, "H0", ""), "/H0");
  FourierField a = field_from_json(require(j, "theta0_a", ""), "/theta0_a");
  if (lie.dim() == 0 && a.lie_valued())
    throw IoError("theta0_a must be plain for a trivial structure group", "/theta0_a");
  return AlgebroidData(H0, ConnectionField(a.lie_valued() ? a : FourierField(1, a.cutoff(), lie.dim(), lie.name())), lie);
}

AlgebroidData load_algebroid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw IoError(std::string("malformed JSON: ") + e.what(), path);
  }
  return algebroid_from_json(j);
}

void save_algebroid(const AlgebroidData& alg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << algebroid_to_json(alg).dump(2) << "\n";
}

} // namespace g2strom
