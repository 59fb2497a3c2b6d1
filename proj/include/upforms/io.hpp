#pragma once

// JSON serialization of reports and manifest loading. Field order is fixed
// by construction (ordered_json) so identical runs produce byte-identical
// output; reports double as regression fixtures.

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "upforms/cartier.hpp"
#include "upforms/errors.hpp"
#include "upforms/harness.hpp"

namespace upforms {

using ordered_json = nlohmann::ordered_json;

inline ordered_json to_json(const SurjectivityReport& r) {
    ordered_json j;
    j["p"] = r.p;
    j["k"] = r.k;
    j["k0"] = r.k0;
    j["k_prime"] = r.k_prime;
    j["dim_k"] = r.dim_k;
    j["dim_k_prime"] = r.dim_k_prime;
    j["image_rank"] = r.image_rank;
    j["contained"] = r.contained;
    j["surjective"] = r.surjective;
    j["precision_used"] = r.precision_used;
    j["serre_bound"] = r.serre_bound;
    j["hypothesis_flag"] = to_string(r.hypothesis_flag);
    if (r.dim_mode) j["dim_mode"] = *r.dim_mode;
    return j;
}

inline ordered_json to_json(const std::vector<SurjectivityReport>& reports) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return arr;
}

inline ordered_json to_json(const TwistConfig& cfg, const TraceSurjectivityReport& r) {
    ordered_json j;
    j["p"] = cfg.field.modulus();
    j["d"] = cfg.degree;
    j["S"] = cfg.points;
    j["source_dim"] = r.source_dim;
    j["target_dim"] = r.target_dim;
    j["rank"] = r.rank;
    j["surjective"] = r.surjective;
    return j;
}

inline ordered_json to_json(std::uint64_t p, std::size_t max_deg, const TangoSearchResult& r) {
    ordered_json j;
    j["p"] = p;
    j["max_deg"] = max_deg;
    j["max_value"] = r.max_value;
    j["witness_coeffs"] = r.witness_coeffs;
    return j;
}

// Lossy human-readable table; JSON is the machine format.
inline std::string report_table(const std::vector<SurjectivityReport>& reports) {
    std::ostringstream os;
    os << std::left << std::setw(5) << "p" << std::setw(6) << "k" << std::setw(5) << "k0"
       << std::setw(5) << "k'" << std::setw(7) << "dim_k" << std::setw(8) << "dim_k'"
       << std::setw(6) << "rank" << "verdict" << '\n';
    for (const auto& r : reports) {
        os << std::left << std::setw(5) << r.p << std::setw(6) << r.k << std::setw(5) << r.k0
           << std::setw(5) << r.k_prime << std::setw(7) << r.dim_k << std::setw(8)
           << r.dim_k_prime << std::setw(6) << r.image_rank
           << (r.surjective ? "surjective" : "NOT-SURJECTIVE");
        if (r.hypothesis_flag == HypothesisFlag::outside_theorem) os << " (outside theorem)";
        os << '\n';
    }
    return os.str();
}

inline GeneratorManifest manifest_from_json(const nlohmann::json& j) {
    GeneratorManifest m;
    try {
        m.label = j.at("label").get<std::string>();
        m.p = j.at("p").get<std::uint64_t>();
        m.cusp_width = j.at("cusp_width").get<std::uint64_t>();
        m.index = j.at("index").get<std::uint64_t>();
        PrimeField field(m.p);
        for (const auto& g : j.at("generators")) {
            GeneratorManifest::Generator gen;
            gen.weight = g.at("weight").get<long long>();
            for (const auto& c : g.at("coeffs"))
                gen.coeffs.push_back(field.reduce_int(c.get<long long>()));
            m.generators.push_back(std::move(gen));
        }
        if (j.contains("dimension_table")) {
            for (const auto& [key, value] : j.at("dimension_table").items()) {
                long long weight = 0;
                try {
                    weight = std::stoll(key);
                } catch (const std::exception&) {
                    throw usage_error("manifest: dimension_table keys must be decimal weights");
                }
                m.dimension_table[weight] = value.get<std::size_t>();
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw usage_error(std::string("manifest: malformed JSON: ") + e.what());
    }
    m.validate();
    return m;
}

inline GeneratorManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("manifest: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw usage_error(std::string("manifest: parse error in ") + path + ": " + e.what());
    }
    return manifest_from_json(j);
}

} // namespace upforms
