// Command-line front end: every library operation behind JSON-friendly
// subcommands. Exit codes: 0 pass, 1 check failed, 2 usage error,
// 3 resource cap exceeded.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qcl/acceptance.hpp"
#include "qcl/qcl.hpp"

namespace {

using qcl::Json;
using qcl::Rational;
using qcl::Signature;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

struct GlobalOptions {
    std::string q_text;
    std::string t_text;
    std::string scheme_name = "schur";
    std::string mode = "exact";
    std::uint64_t seed = 0;
    bool json = false;

    bool float_mode() const { return mode == "float"; }

    Rational q() const {
        if (q_text.empty()) throw CLI::ValidationError("--q is required for this subcommand");
        return qcl::parse_rational(q_text);
    }

    Rational t() const {
        if (t_text.empty()) throw CLI::ValidationError("--t is required for this subcommand");
        return qcl::parse_rational(t_text);
    }

    qcl::WeightScheme scheme() const {
        if (scheme_name == "schur") return qcl::WeightScheme::schur(q());
        if (scheme_name == "macdonald") return qcl::WeightScheme::macdonald(q(), t());
        throw CLI::ValidationError("--scheme must be schur or macdonald");
    }
};

std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(qcl::parse_rational(item));
    if (out.empty()) throw std::invalid_argument("empty rational list");
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    for (const Rational& r : parse_rational_list(text)) out.push_back(qcl::to_double(r));
    return out;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    return Json::parse(in);
}

qcl::LevelMeasure read_measure(const std::string& path) {
    return qcl::measure_from_json(read_json_file(path));
}

// inline JSON if the argument starts with '[', otherwise a file path
std::vector<Signature> read_chain(const std::string& arg) {
    Json j;
    if (!arg.empty() && arg.front() == '[') {
        j = Json::parse(arg);
    } else {
        j = read_json_file(arg);
    }
    std::vector<Signature> chain;
    for (const auto& s : j) chain.push_back(qcl::signature_from_json(s));
    if (chain.empty()) throw std::invalid_argument("empty chain");
    return chain;
}

void print_double(double v) { std::cout << std::setprecision(17) << v << "\n"; }

// ---- subcommand bodies ----

int run_wdim(const GlobalOptions& g, const std::string& sig_text) {
    const Signature nu = qcl::parse_signature(sig_text);
    if (g.float_mode()) {
        print_double(qcl::weighted_dim_double(g.scheme(), nu));
    } else {
        const Rational value = qcl::weighted_dim(g.scheme(), nu);
        if (g.json) {
            Json j;
            j["sig"] = qcl::to_json(nu);
            j["wdim"] = qcl::to_json(value);
            std::cout << j.dump() << "\n";
        } else {
            std::cout << qcl::to_string(value) << "\n";
        }
    }
    return kExitOk;
}

int run_paths(const GlobalOptions& g, const std::string& from_text, const std::string& sig_text,
              bool count_only) {
    const Signature mu = qcl::parse_signature(from_text);
    const Signature nu = qcl::parse_signature(sig_text);
    if (count_only) {
        std::cout << qcl::count_paths(mu, nu).get_str() << "\n";
        return kExitOk;
    }
    const auto paths = qcl::enumerate_paths(mu, nu);
    if (g.json) {
        Json j = Json::array();
        for (const auto& p : paths) j.push_back(qcl::to_json(p));
        std::cout << j.dump() << "\n";
    } else {
        for (const auto& p : paths) {
            for (size_t i = 0; i < p.chain().size(); ++i)
                std::cout << (i ? " " : "") << p.chain()[i].str();
            std::cout << "\n";
        }
    }
    return kExitOk;
}

int run_schur(const GlobalOptions& g, const std::string& sig_text, const std::string& point_text) {
    const Signature nu = qcl::parse_signature(sig_text);
    if (g.float_mode()) {
        print_double(qcl::schur_eval_double(nu, parse_double_list(point_text)));
    } else {
        std::cout << qcl::to_string(qcl::schur_eval(nu, parse_rational_list(point_text))) << "\n";
    }
    return kExitOk;
}

int run_psi(const GlobalOptions& g, const std::string& mu_text, const std::string& nu_text) {
    const Rational value = qcl::macdonald_psi(qcl::parse_signature(mu_text),
                                              qcl::parse_signature(nu_text), g.q(), g.t());
    std::cout << qcl::to_string(value) << "\n";
    return kExitOk;
}

int run_coherence_check(const GlobalOptions& g, const std::string& mN_path,
                        const std::string& mN1_path) {
    const auto report =
        qcl::check_coherence(read_measure(mN_path), read_measure(mN1_path), g.scheme());
    if (g.json) {
        Json j;
        j["ok"] = report.ok;
        j["worst_residual"] = qcl::to_json(report.worst_residual);
        Json v = Json::array();
        for (const auto& viol : report.violations) {
            Json entry;
            entry["sig"] = qcl::to_json(viol.vertex);
            entry["lhs"] = qcl::to_json(viol.lhs);
            entry["rhs"] = qcl::to_json(viol.rhs);
            v.push_back(std::move(entry));
        }
        j["violations"] = std::move(v);
        std::cout << j.dump() << "\n";
    } else if (report.ok) {
        std::cout << "OK\n";
    } else {
        std::cout << "coherence fails at " << report.violations.size()
                  << " vertex(es); worst residual " << qcl::to_string(report.worst_residual)
                  << "\n";
        for (const auto& viol : report.violations)
            std::cout << "  " << viol.vertex.str() << ": P_N=" << qcl::to_string(viol.lhs)
                      << " induced=" << qcl::to_string(viol.rhs) << "\n";
    }
    return report.ok ? kExitOk : kExitCheckFailed;
}

int run_pullback(const GlobalOptions& g, const std::string& sig_text, int k) {
    const auto measure = qcl::pullback_measure(g.scheme(), qcl::parse_signature(sig_text), k);
    std::cout << qcl::to_json(measure).dump() << "\n";
    return kExitOk;
}

int run_sample(const GlobalOptions& g, const std::string& measure_path, long n) {
    const qcl::LevelMeasure pN = read_measure(measure_path);
    const qcl::WeightScheme scheme = g.scheme();
    std::map<qcl::GTPath, long> counts;
    for (long i = 0; i < n; ++i)
        ++counts[qcl::sample_path(scheme, pN, g.seed + static_cast<std::uint64_t>(i))];
    if (g.json) {
        Json j;
        j["samples"] = n;
        j["seed"] = g.seed;
        Json arr = Json::array();
        for (const auto& [path, count] : counts) {
            Json entry;
            entry["path"] = qcl::to_json(path);
            entry["count"] = count;
            arr.push_back(std::move(entry));
        }
        j["counts"] = std::move(arr);
        std::cout << j.dump() << "\n";
    } else {
        for (const auto& [path, count] : counts)
            std::cout << count << "\t" << qcl::to_json(path).dump() << "\n";
    }
    return kExitOk;
}

int run_ergodic(const GlobalOptions& g, const std::string& v_text, const std::string& chain_arg) {
    const Signature v = qcl::parse_signature(v_text);
    const auto chain = read_chain(chain_arg);
    const auto ratios = qcl::ergodic_ratios(g.scheme(), v, chain);
    if (g.json) {
        Json j = Json::array();
        for (size_t i = 0; i < ratios.size(); ++i) {
            Json entry;
            entry["level"] = chain[i].level();
            entry["ratio"] = qcl::to_json(ratios[i]);
            j.push_back(std::move(entry));
        }
        std::cout << j.dump() << "\n";
    } else {
        for (size_t i = 0; i < ratios.size(); ++i)
            std::cout << chain[i].level() << " " << qcl::to_string(ratios[i]) << "\n";
    }
    return kExitOk;
}

int run_theta(const GlobalOptions& g, const std::string& chain_arg, int window) {
    const auto theta = qcl::boundary_theta(read_chain(chain_arg), window);
    if (g.json) {
        Json j;
        j["theta"] = theta.theta;
        j["stable_upto"] = theta.stable_upto;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "theta: [";
        for (size_t i = 0; i < theta.theta.size(); ++i)
            std::cout << (i ? "," : "") << theta.theta[i];
        std::cout << "] stable_upto: " << theta.stable_upto << "\n";
    }
    return kExitOk;
}

int run_kms_check(const GlobalOptions& g, const std::string& measure_path, long trials) {
    const qcl::LevelMeasure measure = read_measure(measure_path);
    const qcl::WeightScheme scheme = g.scheme();
    const qcl::QuantizedCharacterLevel chi = qcl::character_at(scheme, measure);
    std::vector<Signature> support;
    for (const auto& [sig, mass] : measure.atoms) support.push_back(sig);
    std::mt19937_64 rng(g.seed);
    std::uniform_int_distribution<long> num(-9, 9), den(1, 9);
    for (long trial = 0; trial < trials; ++trial) {
        std::map<Signature, qcl::Matrix> xb, yb;
        for (const Signature& sig : support) {
            const size_t side = static_cast<size_t>(qcl::dimension(sig).get_ui());
            qcl::Matrix mx(side, side), my(side, side);
            for (size_t i = 0; i < side; ++i)
                for (size_t j = 0; j < side; ++j) {
                    mx.at(i, j) = qcl::make_rational(num(rng), den(rng));
                    my.at(i, j) = qcl::make_rational(num(rng), den(rng));
                }
            xb.emplace(sig, std::move(mx));
            yb.emplace(sig, std::move(my));
        }
        const auto x = qcl::make_block_operator(measure.level, std::move(xb));
        const auto y = qcl::make_block_operator(measure.level, std::move(yb));
        const qcl::KmsReport r = qcl::kms_check(chi, x, y, scheme);
        if (!r.ok) {
            std::cout << "KMS fails at trial " << trial << ": lhs=" << qcl::to_string(r.lhs)
                      << " rhs=" << qcl::to_string(r.rhs) << "\n";
            return kExitCheckFailed;
        }
    }
    std::cout << "OK (" << trials << " trials)\n";
    return kExitOk;
}

int run_verify_branching(const GlobalOptions& g, int maxlevel, long long max_entry) {
    const qcl::WeightScheme scheme = g.scheme();
    for (int level = 2; level <= maxlevel; ++level) {
        for (const Signature& nu : qcl::signatures_with_entries(level, -max_entry, max_entry)) {
            if (!qcl::verify_density_branching(scheme, nu)) {
                std::cout << "branching reconstruction fails at " << nu.str() << "\n";
                return kExitCheckFailed;
            }
        }
        std::cout << "level " << level << " OK\n";
    }
    return kExitOk;
}

int run_genfunc(const GlobalOptions& g, const std::string& measure_path, bool expand,
                const std::string& eval_text) {
    const qcl::LevelMeasure pN = read_measure(measure_path);
    if (!eval_text.empty()) {
        if (g.float_mode()) {
            print_double(
                qcl::gen_function_eval_double(pN, qcl::to_double(g.q()), parse_double_list(eval_text)));
        } else {
            std::cout << qcl::to_string(qcl::gen_function_eval(pN, g.q(), parse_rational_list(eval_text)))
                      << "\n";
        }
        return kExitOk;
    }
    (void)expand;  // expansion is the default
    std::cout << qcl::to_json(qcl::gen_function(pN, g.q())).dump() << "\n";
    return kExitOk;
}

int run_genfunc_stability(const GlobalOptions& g, const std::string& mN_path,
                          const std::string& mN1_path) {
    const bool ok = qcl::stability_check(read_measure(mN_path), read_measure(mN1_path), g.q());
    std::cout << (ok ? "OK" : "stability fails") << "\n";
    return ok ? kExitOk : kExitCheckFailed;
}

int run_acceptance() {
    const auto results = qcl::acceptance::run_all();
    return qcl::acceptance::report(results, std::cout) ? kExitOk : kExitCheckFailed;
}

// ---- weighted-dimension memo persistence ----

std::optional<std::string> cache_file_path() {
    const char* dir = std::getenv("QCL_CACHE_DIR");
    if (dir == nullptr || *dir == '\0') return std::nullopt;
    return std::string(dir) + "/wdim-cache.txt";
}

void load_cache() {
    if (const auto path = cache_file_path()) {
        std::ifstream in(*path);
        if (in) qcl::load_wdim_cache(in);
    }
}

void save_cache() {
    if (const auto path = cache_file_path()) {
        std::ofstream out(*path, std::ios::trunc);
        if (out) qcl::save_wdim_cache(out);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact computations on the weighted Gelfand-Tsetlin graph"};
    app.require_subcommand(1);
    app.fallthrough(true);

    GlobalOptions g;
    app.add_option("--q", g.q_text, "deformation parameter as a rational p/q");
    app.add_option("--t", g.t_text, "second parameter for the macdonald scheme");
    app.add_option("--scheme", g.scheme_name, "weight scheme: schur | macdonald")
        ->check(CLI::IsMember({"schur", "macdonald"}));
    app.add_option("--mode", g.mode, "arithmetic mode: exact | float")
        ->check(CLI::IsMember({"exact", "float"}));
    app.add_option("--seed", g.seed, "seed for randomized subcommands");
    app.add_flag("--json", g.json, "structured JSON output");

    int rc = kExitOk;

    std::string sig_text, from_text = "[]", point_text, mu_text, nu_text;
    std::string mN_path, mN1_path, measure_path, chain_arg, eval_text, v_text;
    bool count_only = false, expand = false;
    int k_level = 1, maxlevel = 4, window = 5;
    long n_samples = 1, trials = 100;
    long long max_entry = 2;

    auto* wdim = app.add_subcommand("wdim", "weighted dimension of a signature");
    wdim->add_option("--sig", sig_text, "signature, e.g. \"[2,0]\"")->required();
    wdim->callback([&] { rc = run_wdim(g, sig_text); });

    auto* paths = app.add_subcommand("paths", "enumerate or count interlacing chains");
    paths->add_option("--sig", sig_text, "target signature")->required();
    paths->add_option("--from", from_text, "source signature (default: the root)");
    paths->add_flag("--count-only", count_only, "print only the path count");
    paths->callback([&] { rc = run_paths(g, from_text, sig_text, count_only); });

    auto* schur = app.add_subcommand("schur", "rational Schur polynomial value");
    schur->add_option("--sig", sig_text)->required();
    schur->add_option("--point", point_text, "comma-separated rationals")->required();
    schur->callback([&] { rc = run_schur(g, sig_text, point_text); });

    auto* psi = app.add_subcommand("psi", "Macdonald branching coefficient");
    psi->add_option("--mu", mu_text)->required();
    psi->add_option("--nu", nu_text)->required();
    psi->callback([&] { rc = run_psi(g, mu_text, nu_text); });

    auto* coh = app.add_subcommand("coherence-check", "exact coherence of consecutive measures");
    coh->add_option("--mN", mN_path, "level-N measure JSON file")->required();
    coh->add_option("--mN1", mN1_path, "level-(N+1) measure JSON file")->required();
    coh->callback([&] { rc = run_coherence_check(g, mN_path, mN1_path); });

    auto* pullback = app.add_subcommand("pullback", "level-K measure pulled back from a block");
    pullback->add_option("--sig", sig_text)->required();
    pullback->add_option("--K", k_level, "target level")->required();
    pullback->callback([&] { rc = run_pullback(g, sig_text, k_level); });

    auto* sample = app.add_subcommand("sample", "seeded path samples from a level measure");
    sample->add_option("--measure", measure_path, "measure JSON file")->required();
    sample->add_option("--n", n_samples, "number of samples (seeds seed..seed+n-1)");
    sample->callback([&] { rc = run_sample(g, measure_path, n_samples); });

    auto* ergodic = app.add_subcommand("ergodic", "normalized relative weighted dimensions");
    ergodic->add_option("--v", v_text, "base signature")->required();
    ergodic->add_option("--chain", chain_arg, "inline JSON array of signatures, or a file")
        ->required();
    ergodic->callback([&] { rc = run_ergodic(g, v_text, chain_arg); });

    auto* theta = app.add_subcommand("theta", "tail-coordinate stabilization of a chain");
    theta->add_option("--chain", chain_arg, "inline JSON array of signatures, or a file")
        ->required();
    theta->add_option("--window", window, "constancy window (default 5)");
    theta->callback([&] { rc = run_theta(g, chain_arg, window); });

    auto* kms = app.add_subcommand("kms-check", "randomized exact KMS verification");
    kms->add_option("--measure", measure_path, "measure JSON file")->required();
    kms->add_option("--trials", trials, "number of randomized operator pairs");
    kms->callback([&] { rc = run_kms_check(g, measure_path, trials); });

    auto* branching = app.add_subcommand("verify-branching", "density-matrix reconstruction");
    branching->add_option("--maxlevel", maxlevel, "highest level to check (default 4)");
    branching->add_option("--max-entry", max_entry, "entry box half-width (default 2)");
    branching->callback([&] { rc = run_verify_branching(g, maxlevel, max_entry); });

    auto* genfunc = app.add_subcommand("genfunc", "generating function of a level measure");
    genfunc->add_option("--measure", measure_path, "measure JSON file")->required();
    genfunc->add_flag("--expand", expand, "print the exact Laurent expansion (default)");
    genfunc->add_option("--eval", eval_text, "evaluate at comma-separated rationals");
    genfunc->callback([&] { rc = run_genfunc(g, measure_path, expand, eval_text); });

    auto* stability = app.add_subcommand("genfunc-stability", "generating-function coherence");
    stability->add_option("--mN", mN_path)->required();
    stability->add_option("--mN1", mN1_path)->required();
    stability->callback([&] { rc = run_genfunc_stability(g, mN_path, mN1_path); });

    auto* accept = app.add_subcommand("acceptance", "run the full exact acceptance table");
    accept->callback([&] { rc = run_acceptance(); });

    load_cache();
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const qcl::resource_error& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return kExitResource;
    } catch (const Json::exception& e) {
        std::cerr << "malformed JSON: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    save_cache();
    return rc;
}
