// qpr: command-line front end. Angles are radians.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qpr/certifier.hpp"
#include "qpr/documents.hpp"
#include "qpr/ontic_sim.hpp"
#include "qpr/verify_suite.hpp"

namespace {

using namespace qpr;

constexpr int kFeasible = 0;
constexpr int kInfeasible = 1;
constexpr int kInvalidInput = 2;
constexpr int kNumerical = 3;

/// Input error detected by the CLI itself.
class UsageError : public Error {
public:
    using Error::Error;
};

Json num(double x) { return to_json(TaggedNumber::of(x)); }

ArithmeticMode resolve_mode(const std::string& flag, ArithmeticMode fallback) {
    if (!flag.empty()) return parse_mode(flag);
    if (const char* env = std::getenv("QPR_MODE"); env && *env) return parse_mode(env);
    return fallback;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const Json& j, const std::string& out) {
    const std::string text = j.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + out + "'");
    f << text;
}

FamilySpec make_spec(const std::string& kind, double theta, double phi, std::optional<double> q0) {
    FamilySpec spec{parse_family_kind(kind), theta, phi, q0};
    validate(spec);
    return spec;
}

Json parameters_json(const FamilySpec& spec) {
    Json p = Json::object();
    if (spec.kind != FamilyKind::Single && spec.kind != FamilyKind::Stabilizer &&
        spec.kind != FamilyKind::Icosahedron)
        p["theta"] = num(spec.theta);
    if (spec.kind == FamilyKind::C2 || spec.kind == FamilyKind::Cuboid) p["phi"] = num(spec.phi);
    if (spec.q0) p["q0"] = num(*spec.q0);
    return p;
}

struct CertifyArgs {
    std::string input;
    std::string mode;
    std::string out;
    bool raw_vertex = false;
};

int cmd_certify(const CertifyArgs& a) {
    const std::string text = read_file(a.input);
    const BasesDocument doc = parse_bases_document(text);
    if (doc.dim != 2) throw UsageError("certify decides qubit bases only (dim 2), got dim " + std::to_string(doc.dim));
    const auto bases = doc.qubit_bases();
    CertifyOptions opts;
    opts.mode = resolve_mode(a.mode, ArithmeticMode::Exact);
    opts.symmetrize = !a.raw_vertex;
    const auto problem = build_problem(bases);
    const auto cert = certify(bases, opts);
    emit(to_json(make_certificate_document(cert, problem, text)), a.out);
    return cert.feasible() ? kFeasible : kInfeasible;
}

struct FamilyArgs {
    std::string kind;
    double theta = 0.0;
    double phi = 0.0;
    std::optional<double> q0;
    bool emit_frame = false;
    std::string out;
};

int cmd_family(const FamilyArgs& a) {
    const FamilySpec spec = make_spec(a.kind, a.theta, a.phi, a.q0);
    const auto bases = family_bases(spec);
    Json out{{"version", 1}, {"dim", 2}, {"family", to_string(spec.kind)}};
    out["parameters"] = parameters_json(spec);
    out["bases"] = bases_json(bases);
    if (a.emit_frame) {
        const auto q = family_distribution(spec);
        Json dist = Json::object();
        for (std::size_t i = 0; i < q.values.size(); ++i) dist[q.space.label(i)] = num(q.values[i]);
        out["distribution"] = dist;
        out["frame"] = frame_json(build_family_frame(spec));
    }
    emit(out, a.out);
    return 0;
}

struct ScanArgs {
    std::string kind;
    std::string param;
    std::optional<double> lo;
    std::optional<double> hi;
    double tol = 1e-10;
    double theta = 0.0;
    double phi = 0.0;
    std::string mode;
};

int cmd_scan(const ScanArgs& a) {
    FamilySpec spec{parse_family_kind(a.kind), a.theta, a.phi, std::nullopt};
    if (a.param != "theta" && a.param != "phi") throw UsageError("--param must be theta or phi");
    const double lo = a.lo.value_or(a.param == "theta" ? 0.5 : 0.01);
    const double hi = a.hi.value_or(std::numbers::pi / 2);
    const ArithmeticMode mode = resolve_mode(a.mode, ArithmeticMode::Float);
    const double boundary = threshold_scan(spec, a.param, lo, hi, a.tol, mode);
    Json out{{"family", to_string(spec.kind)}, {"parameter", a.param}, {"mode", to_string(mode)}};
    out["lo"] = num(lo);
    out["hi"] = num(hi);
    out["tol"] = num(a.tol);
    out["boundary"] = num(boundary);
    out["sin2_boundary"] = num(std::sin(boundary) * std::sin(boundary));
    out["cos_boundary"] = num(std::cos(boundary));
    emit(out, "");
    return 0;
}

struct SimulateArgs {
    std::string family = "stabilizer";
    double theta = 0.0;
    double phi = 0.0;
    std::optional<double> q0;
    std::string initial;
    std::string circuit;
    std::string measure;
};

int cmd_simulate(const SimulateArgs& a) {
    const SubtheoryModel model = make_model(make_spec(a.family, a.theta, a.phi, a.q0));
    const auto gates = parse_circuit(a.circuit);
    const auto result = run_circuit(model, a.initial, gates, a.measure);
    Json ontic = Json::array(), quantum = Json::array();
    for (double p : result.ontic) ontic.push_back(num(p));
    for (double p : result.quantum) quantum.push_back(num(p));
    Json out{{"family", a.family}, {"initial", a.initial}, {"circuit", gates}, {"measure", a.measure}};
    out["outcomes"] = {"+", "-"};
    out["ontic"] = ontic;
    out["quantum"] = quantum;
    out["max_difference"] = num(result.max_difference);
    out["agree"] = result.agree;
    emit(out, "");
    return result.agree ? 0 : kNumerical;
}

struct VerifyArgs {
    std::string suite = "all";
    std::optional<std::size_t> trials;
    std::uint64_t seed = 7;
    std::string out;
};

int cmd_verify(const VerifyArgs& a) {
    VerifyOptions opts;
    opts.suite = parse_suite(a.suite);
    opts.trials = a.trials;
    opts.seed = a.seed;
    const auto report = run_verification(opts);
    emit(report.to_json(), a.out);
    return report.all_passed() ? 0 : 1;
}

template <typename F>
int guarded(F&& f) {
    try {
        return f();
    } catch (const NumericalError& e) {
        std::cerr << "qpr: numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const FrameConstructionError& e) {
        std::cerr << "qpr: numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const Error& e) {
        std::cerr << "qpr: invalid input: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "qpr: internal error: " << e.what() << "\n";
        return kNumerical;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quasiprobability representations of qubit bases. All angles are in radians."};
    app.require_subcommand(1);

    CertifyArgs certify_args;
    auto* certify_cmd = app.add_subcommand("certify", "Decide simultaneous non-negativity of a bases file");
    certify_cmd->add_option("input", certify_args.input, "BasesDocument JSON file")->required();
    certify_cmd->add_option("--mode", certify_args.mode, "exact or float (default: $QPR_MODE, else exact)");
    certify_cmd->add_option("--out", certify_args.out, "Write the certificate here instead of stdout");
    certify_cmd->add_flag("--raw-vertex", certify_args.raw_vertex, "Report the simplex vertex without symmetrizing");

    FamilyArgs family_args;
    auto* family_cmd = app.add_subcommand("family", "Emit the bases (and optionally the frame) of a family");
    family_cmd->add_option("kind", family_args.kind, "single|pair|d3|c2|cuboid|stabilizer|icosahedron")->required();
    family_cmd->add_option("--theta", family_args.theta, "theta in radians");
    family_cmd->add_option("--phi", family_args.phi, "phi in radians");
    family_cmd->add_option("--q0", family_args.q0, "non-symmetric weight q(+,0) for d3 and c2");
    family_cmd->add_flag("--emit-frame", family_args.emit_frame, "Include the distribution and F, G operators");
    family_cmd->add_option("--out", family_args.out, "Write here instead of stdout");

    ScanArgs scan_args;
    auto* scan_cmd = app.add_subcommand("scan", "Bisect for the feasibility boundary of a family");
    scan_cmd->add_option("kind", scan_args.kind, "family kind")->required();
    scan_cmd->add_option("--param", scan_args.param, "theta or phi")->required();
    scan_cmd->add_option("--lo", scan_args.lo, "lower end in radians (default 0.5 for theta, 0.01 for phi)");
    scan_cmd->add_option("--hi", scan_args.hi, "upper end in radians (default pi/2)");
    scan_cmd->add_option("--tol", scan_args.tol, "bisection tolerance in radians");
    scan_cmd->add_option("--theta", scan_args.theta, "fixed theta when scanning phi");
    scan_cmd->add_option("--phi", scan_args.phi, "fixed phi when scanning theta");
    scan_cmd->add_option("--mode", scan_args.mode, "exact or float (default: $QPR_MODE, else float)");

    SimulateArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "Run a circuit on the ontic model and on the quantum state");
    sim_cmd->add_option("--family", sim_args.family, "family kind (default stabilizer)");
    sim_cmd->add_option("--theta", sim_args.theta, "theta in radians");
    sim_cmd->add_option("--phi", sim_args.phi, "phi in radians");
    sim_cmd->add_option("--q0", sim_args.q0, "non-symmetric weight q(+,0)");
    sim_cmd->add_option("--initial", sim_args.initial, "initial state, e.g. z+ or b1-")->required();
    sim_cmd->add_option("--circuit", sim_args.circuit, "space-separated gates applied left to right");
    sim_cmd->add_option("--measure", sim_args.measure, "measured basis, e.g. x or b2")->required();

    VerifyArgs verify_args;
    auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance suite and print a JSON report");
    verify_cmd->add_option("--suite", verify_args.suite, "all, qubit or qudit");
    verify_cmd->add_option("--trials", verify_args.trials, "trial count for every randomized criterion");
    verify_cmd->add_option("--seed", verify_args.seed, "random seed");
    verify_cmd->add_option("--out", verify_args.out, "Write here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInvalidInput;
    }

    if (*certify_cmd) return guarded([&] { return cmd_certify(certify_args); });
    if (*family_cmd) return guarded([&] { return cmd_family(family_args); });
    if (*scan_cmd) return guarded([&] { return cmd_scan(scan_args); });
    if (*sim_cmd) return guarded([&] { return cmd_simulate(sim_args); });
    return guarded([&] { return cmd_verify(verify_args); });
}
