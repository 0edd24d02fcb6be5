#ifndef G2STROM_FIELD_IO_HPP
#define G2STROM_FIELD_IO_HPP

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "g2strom/courant.hpp"
#include "g2strom/fourier.hpp"

namespace g2strom {

/// Field file schema:
///   { "degree": int, "cutoff": int, "lie": null | {"name": "su2"},
///     "coeffs": [ { "k": [7 ints],
///                   "terms": [ {"idx": [ints], "re": f, "im": f, "lie": [f]?} ] } ] }
/// Each term contributes (re + i im) times the basis form e^idx, spread over
/// the Lie basis by the optional "lie" weights. The reality constraint
/// c_{-k} = conj(c_k) is validated on load.
nlohmann::json field_to_json(const FourierField& f);
FourierField field_from_json(const nlohmann::json& j, const std::string& location = "");

void save_field(const FourierField& f, const std::string& path);
FourierField load_field(const std::string& path);

/// Algebroid file: { "lie": {"name":...,"alpha_prime":...}, "H0": field,
/// "theta0_a": field }.
nlohmann::json algebroid_to_json(const AlgebroidData& alg);
AlgebroidData algebroid_from_json(const nlohmann::json& j);
AlgebroidData load_algebroid(const std::string& path);
void save_algebroid(const AlgebroidData& alg, const std::string& path);

} // namespace g2strom

#endif
