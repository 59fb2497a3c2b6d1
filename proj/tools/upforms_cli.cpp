// upforms: exact mod-p verification of U-operator surjectivity between
// weight-k and weight-k' q-expansion spaces, plus the Cartier/Tango checks
// on the projective line. Exit status encodes the mathematical verdict so
// runs double as regression tests:
//   0  all verdicts in the run are positive
//   1  some verdict is negative
//   2  usage error
//   3  computational guard tripped (enumeration cap, generator precision)
//   4  internal error

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "upforms/cartier.hpp"
#include "upforms/harness.hpp"
#include "upforms/io.hpp"
#include "upforms/level1.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdictFalse = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;
constexpr int kExitInternal = 4;

unsigned workers_from_env() {
    const char* env = std::getenv("UPFORMS_WORKERS");
    if (!env) return 0; // 0 = available parallelism
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0') return 0;
    return static_cast<unsigned>(v);
}

void print_report(const upforms::SurjectivityReport& r, const std::string& format) {
    if (format == "json")
        std::cout << upforms::to_json(r).dump(2) << '\n';
    else
        std::cout << upforms::report_table({r});
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mod-p modular forms: U-operator surjectivity and Cartier/Tango checks"};
    app.require_subcommand(1);

    std::uint64_t p = 0;
    long long k = 0;
    long long k_min = -1, k_max = 0;
    long long bundle_degree = 0;
    std::size_t basis_row = 0, max_deg = 0;
    std::size_t precision_override = 0;
    std::vector<std::uint64_t> points;
    std::string format = "table";
    std::string manifest_path;
    bool allow_below_range = false;

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"json", "table"}))
            ->capture_default_str();
    };

    CLI::App* verify = app.add_subcommand(
        "verify-up", "verify that U maps M_k onto M_k' over F_p (level 1)");
    verify->add_option("--p", p, "prime modulus")->required();
    verify->add_option("--k", k, "source weight")->required();
    verify->add_flag("--allow-below-range", allow_below_range,
                     "explore weights in [2, p+1]; reports are flagged outside_theorem");
    add_format(verify);

    CLI::App* scan = app.add_subcommand(
        "scan-up", "verify every even weight in a range; worker count from UPFORMS_WORKERS");
    scan->add_option("--p", p, "prime modulus")->required();
    scan->add_option("--kmin", k_min, "lowest weight (default p+2)");
    scan->add_option("--kmax", k_max, "highest weight")->required();
    add_format(scan);

    CLI::App* basis = app.add_subcommand("basis", "print the echelon basis of M_k over F_p");
    basis->add_option("--p", p, "prime modulus")->required();
    basis->add_option("--k", k, "weight")->required();
    basis->add_option("--prec", precision_override, "number of q-expansion coefficients");
    add_format(basis);

    CLI::App* uapply = app.add_subcommand("u-apply", "print U applied to one echelon basis row");
    uapply->add_option("--p", p, "prime modulus")->required();
    uapply->add_option("--k", k, "weight")->required();
    uapply->add_option("--basis-row", basis_row, "row index, 0-based")->required();
    add_format(uapply);

    CLI::App* cart = app.add_subcommand(
        "cartier-verify", "verify trace-map surjectivity on P^1 for L = O(d*infty), poles S");
    cart->add_option("--p", p, "prime modulus")->required();
    cart->add_option("--d", bundle_degree, "degree of the twisting bundle")->required();
    cart->add_option("--points", points, "finite rational points of S (comma separated)")
        ->delimiter(',');
    add_format(cart);

    CLI::App* tango = app.add_subcommand(
        "tango-search", "exhaustive Tango sum over polynomials of degree <= max-deg");
    tango->add_option("--p", p, "prime modulus")->required();
    tango->add_option("--max-deg", max_deg, "degree bound")->required();
    add_format(tango);

    CLI::App* mverify = app.add_subcommand(
        "manifest-verify", "verify U surjectivity from user-supplied generator data");
    mverify->add_option("--manifest", manifest_path, "manifest JSON path")->required();
    mverify->add_option("--k", k, "source weight")->required();
    mverify->add_flag("--allow-below-range", allow_below_range,
                      "explore weights in [2, p+1]; reports are flagged outside_theorem");
    add_format(mverify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        upforms::VerifyOptions opts;
        opts.allow_below_range = allow_below_range;

        if (verify->parsed()) {
            upforms::PrimeField field(p);
            upforms::SurjectivityReport r = upforms::verify_level1(field, k, opts);
            print_report(r, format);
            return r.surjective ? kExitOk : kExitVerdictFalse;
        }

        if (scan->parsed()) {
            upforms::PrimeField field(p);
            if (k_min < 0) k_min = static_cast<long long>(p) + 2;
            upforms::ScanResult res =
                upforms::scan_level1(field, k_min, k_max, workers_from_env());
            if (format == "json") {
                std::cout << upforms::to_json(res.reports).dump(2) << '\n';
            } else {
                std::cout << upforms::report_table(res.reports);
                std::cout << res.reports.size() << " reports, " << res.failures
                          << " failures\n";
            }
            return res.failures == 0 ? kExitOk : kExitVerdictFalse;
        }

        if (basis->parsed()) {
            upforms::PrimeField field(p);
            std::size_t dim = upforms::level1_dimension(k);
            std::size_t prec = precision_override > 0 ? precision_override : dim + 2;
            upforms::FormSpace s = upforms::victor_miller_basis(k, prec, field);
            if (format == "json") {
                upforms::ordered_json j;
                j["p"] = p;
                j["k"] = k;
                j["dim"] = s.dim;
                j["precision"] = s.precision;
                upforms::ordered_json rows = upforms::ordered_json::array();
                for (std::size_t i = 0; i < s.dim; ++i)
                    rows.push_back(std::vector<std::uint64_t>(s.basis.row(i).begin(),
                                                              s.basis.row(i).end()));
                j["basis"] = rows;
                std::cout << j.dump(2) << '\n';
            } else {
                std::cout << "M_" << k << " over F_" << p << ": dim " << s.dim << '\n';
                for (std::size_t i = 0; i < s.dim; ++i) {
                    upforms::QExp row(field,
                                      std::vector<std::uint64_t>(s.basis.row(i).begin(),
                                                                 s.basis.row(i).end()));
                    std::cout << "f_" << i << " = " << upforms::to_string(row) << '\n';
                }
            }
            return kExitOk;
        }

        if (uapply->parsed()) {
            upforms::PrimeField field(p);
            std::size_t dim = upforms::level1_dimension(k);
            if (basis_row >= dim)
                throw upforms::usage_error("u-apply: basis row " + std::to_string(basis_row) +
                                           " out of range (dim " + std::to_string(dim) + ")");
            std::size_t prec = static_cast<std::size_t>(p) * (dim + 2);
            upforms::FormSpace s = upforms::victor_miller_basis(k, prec, field);
            upforms::QExp row(field, std::vector<std::uint64_t>(s.basis.row(basis_row).begin(),
                                                                s.basis.row(basis_row).end()));
            upforms::QExp image = upforms::u_slice(row);
            if (format == "json") {
                upforms::ordered_json j;
                j["p"] = p;
                j["k"] = k;
                j["basis_row"] = basis_row;
                j["precision"] = image.precision();
                j["coeffs"] = image.coeffs();
                std::cout << j.dump(2) << '\n';
            } else {
                std::cout << "U f_" << basis_row << " = " << upforms::to_string(image) << '\n';
            }
            return kExitOk;
        }

        if (cart->parsed()) {
            upforms::TwistConfig cfg(upforms::PrimeField(p), bundle_degree, points);
            upforms::TraceSurjectivityReport r = upforms::verify_trace_surjective(cfg);
            if (format == "json") {
                std::cout << upforms::to_json(cfg, r).dump(2) << '\n';
            } else {
                std::cout << "p=" << p << " d=" << bundle_degree << " |S|=" << cfg.points.size()
                          << " source_dim=" << r.source_dim << " target_dim=" << r.target_dim
                          << " rank=" << r.rank
                          << (r.surjective ? " surjective" : " NOT-SURJECTIVE") << '\n';
            }
            return r.surjective ? kExitOk : kExitVerdictFalse;
        }

        if (tango->parsed()) {
            upforms::PrimeField field(p);
            upforms::TangoSearchResult r = upforms::tango_search(field, max_deg);
            if (format == "json") {
                std::cout << upforms::to_json(p, max_deg, r).dump(2) << '\n';
            } else {
                upforms::FpPoly witness(field, r.witness_coeffs);
                std::cout << "searched all " << r.candidates << " polynomials of degree <= "
                          << max_deg << " over F_" << p << " (" << r.skipped
                          << " skipped with df = 0): max = " << r.max_value
                          << ", witness f = " << witness.to_string() << '\n';
            }
            return r.max_value == -1 ? kExitOk : kExitVerdictFalse;
        }

        if (mverify->parsed()) {
            upforms::GeneratorManifest m = upforms::load_manifest(manifest_path);
            upforms::SurjectivityReport r = upforms::verify_manifest(m, k, opts);
            print_report(r, format);
            return r.surjective ? kExitOk : kExitVerdictFalse;
        }

        std::cerr << "error: no subcommand\n";
        return kExitUsage;
    } catch (const upforms::usage_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const upforms::guard_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitGuard;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}
