#include "qpr/ontic_sim.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qpr {

namespace {

constexpr double kStateMatchTol = 1e-9;
constexpr double kCircuitAgreementTol = 1e-10;

std::string normalize_label(std::string text) {
    const std::string unicode_minus = "\xE2\x88\x92";
    for (auto pos = text.find(unicode_minus); pos != std::string::npos; pos = text.find(unicode_minus))
        text.replace(pos, unicode_minus.size(), "-");
    return text;
}

std::string normalize_gate(std::string text) {
    if (text == "\xCE\x93") return "GAMMA";  // Γ
    if (text == "\xCE\xA0") return "PI";     // Π
    for (auto& c : text) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (text == "S") return "P";
    if (text == "SDG") return "PDG";
    return text;
}

}  // namespace

OnticPermutation::OnticPermutation(OnticSpace space, std::vector<std::size_t> image)
    : space_(std::move(space)), image_(std::move(image)) {
    if (image_.size() != space_.size()) throw InvalidArgumentError("permutation size does not match the space");
    std::vector<bool> hit(image_.size(), false);
    for (auto i : image_) {
        if (i >= image_.size() || hit[i]) throw InvalidArgumentError("permutation is not a bijection");
        hit[i] = true;
    }
}

OnticPermutation OnticPermutation::identity(const OnticSpace& space) {
    std::vector<std::size_t> image(space.size());
    for (std::size_t i = 0; i < image.size(); ++i) image[i] = i;
    return OnticPermutation(space, std::move(image));
}

OnticPermutation OnticPermutation::from_labels(const OnticSpace& space,
                                               const std::vector<std::pair<std::string, std::string>>& moves) {
    std::vector<std::size_t> image(space.size());
    for (std::size_t i = 0; i < image.size(); ++i) image[i] = i;
    for (const auto& [from, to] : moves) image[space.index_of(from)] = space.index_of(to);
    return OnticPermutation(space, std::move(image));
}

OnticPermutation OnticPermutation::inverse() const {
    std::vector<std::size_t> inv(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = i;
    return OnticPermutation(space_, std::move(inv));
}

OnticPermutation OnticPermutation::compose(const OnticPermutation& other) const {
    if (!(space_ == other.space_)) throw InvalidArgumentError("cannot compose permutations of different spaces");
    std::vector<std::size_t> out(image_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = image_[other.image_[i]];
    return OnticPermutation(space_, std::move(out));
}

std::string OnticPermutation::describe() const {
    std::string out;
    for (std::size_t i = 0; i < image_.size(); ++i) {
        if (image_[i] == i) continue;
        if (!out.empty()) out += ", ";
        out += space_.label(i) + "->" + space_.label(image_[i]);
    }
    return out.empty() ? "identity" : out;
}

OnticDistribution pushforward(const OnticDistribution& dist, const OnticPermutation& perm) {
    if (!(dist.space == perm.space())) throw InvalidArgumentError("distribution and permutation live on different spaces");
    OnticDistribution out{dist.space, std::vector<double>(dist.values.size())};
    for (std::size_t i = 0; i < dist.values.size(); ++i) out.values[perm(i)] = dist.values[i];
    return out;
}

SubtheoryModel::SubtheoryModel(std::string name, QuasiRep rep, std::vector<ModelBasis> bases)
    : name_(std::move(name)), rep_(std::move(rep)), bases_(std::move(bases)) {
    for (const auto& b : bases_) {
        if (!is_nonnegative_basis(rep_, b.basis))
            throw InvalidArgumentError("basis " + b.name + " is not non-negative in the model's representation");
        states_.push_back({b.name + "+", b.basis.plus()});
        states_.push_back({b.name + "-", b.basis.minus()});
    }
}

std::optional<std::size_t> SubtheoryModel::match_state(const HermitianOp& rho) const {
    for (std::size_t k = 0; k < states_.size(); ++k)
        if (trace_distance(states_[k].rho, rho) < kStateMatchTol) return k;
    return std::nullopt;
}

const ModelState& SubtheoryModel::state(const std::string& label) const {
    const std::string key = normalize_label(label);
    for (const auto& s : states_)
        if (s.label == key) return s;
    throw UnknownNameError("model " + name_ + " has no state '" + label + "'");
}

const ModelBasis& SubtheoryModel::basis(const std::string& name) const {
    for (const auto& b : bases_)
        if (b.name == name) return b;
    throw UnknownNameError("model " + name_ + " has no basis '" + name + "'");
}

const ModelGate& SubtheoryModel::gate(const std::string& name) const {
    const std::string key = normalize_gate(name);
    for (const auto& g : gates_)
        if (g.name == key) return g;
    throw UnknownNameError("gate '" + name + "' is not registered on model " + name_);
}

bool SubtheoryModel::has_gate(const std::string& name) const {
    const std::string key = normalize_gate(name);
    return std::any_of(gates_.begin(), gates_.end(), [&](const ModelGate& g) { return g.name == key; });
}

void SubtheoryModel::register_gate(const std::string& name, const CMatrix& unitary, const OnticPermutation& perm) {
    if (!supervenes(perm, unitary, *this))
        throw SupervenienceError("gate " + name + " does not supervene on " + perm.describe());
    const std::string key = normalize_gate(name);
    gates_.erase(std::remove_if(gates_.begin(), gates_.end(), [&](const ModelGate& g) { return g.name == key; }),
                 gates_.end());
    gates_.push_back({key, unitary, perm});
}

bool SubtheoryModel::try_register(const std::string& name, const CMatrix& unitary) {
    const auto search = find_permutation(unitary, *this);
    if (!search.found()) return false;
    register_gate(name, unitary, search.first());
    return true;
}

namespace {

// Images of every model state under U, as indices into the state list.
std::vector<std::size_t> state_images(const CMatrix& unitary, const SubtheoryModel& model) {
    if (!is_unitary(unitary)) throw InvalidArgumentError("matrix is not unitary");
    std::vector<std::size_t> out;
    for (const auto& s : model.states()) {
        const auto k = model.match_state(s.rho.conjugated(unitary));
        if (!k) throw ContractError("unitary maps " + s.label + " outside the state set of model " + model.name());
        out.push_back(*k);
    }
    return out;
}

}  // namespace

bool supervenes(const OnticPermutation& perm, const CMatrix& unitary, const SubtheoryModel& model, double tol) {
    if (!(perm.space() == model.rep().space())) throw InvalidArgumentError("permutation is not on the model's space");
    const auto images = state_images(unitary, model);
    const auto& states = model.states();
    for (std::size_t k = 0; k < states.size(); ++k) {
        const auto moved = pushforward(distribution(model.rep(), states[k].rho), perm);
        const auto target = distribution(model.rep(), states[images[k]].rho);
        for (std::size_t i = 0; i < moved.values.size(); ++i)
            if (std::abs(moved.values[i] - target.values[i]) > tol) return false;
    }
    return true;
}

PermutationSearch find_permutation(const CMatrix& unitary, const SubtheoryModel& model, bool all_hits, double tol) {
    PermutationSearch out;
    std::vector<std::size_t> images;
    try {
        images = state_images(unitary, model);
    } catch (const ContractError& e) {
        out.note = e.what();
        return out;
    }
    out.precondition_met = true;
    const auto& rep = model.rep();
    const auto& states = model.states();
    const std::size_t n = rep.size();
    // source[l][k] = mu_{rho_k}(l); target[l][k] = mu_{U rho_k U^dagger}(l).
    std::vector<std::vector<double>> source(n), target(n);
    for (std::size_t k = 0; k < states.size(); ++k) {
        const auto mu_src = distribution(rep, states[k].rho);
        const auto mu_dst = distribution(rep, states[images[k]].rho);
        for (std::size_t l = 0; l < n; ++l) {
            source[l].push_back(mu_src.values[l]);
            target[l].push_back(mu_dst.values[l]);
        }
    }
    auto compatible = [&](std::size_t from, std::size_t to) {
        for (std::size_t k = 0; k < states.size(); ++k)
            if (std::abs(source[from][k] - target[to][k]) > tol) return false;
        return true;
    };
    std::vector<std::size_t> image(n);
    std::vector<bool> used(n, false);
    auto search = [&](auto&& self, std::size_t l) -> bool {
        if (l == n) {
            out.hits.emplace_back(rep.space(), image);
            return !all_hits;
        }
        for (std::size_t to = 0; to < n; ++to) {
            if (used[to] || !compatible(l, to)) continue;
            used[to] = true;
            image[l] = to;
            if (self(self, l + 1)) return true;
            used[to] = false;
        }
        return false;
    };
    search(search, 0);
    if (out.hits.empty()) out.note = "no permutation of the ontic space effects this unitary";
    return out;
}

OnticPermutation table_one_gamma() {
    const OnticSpace space = table_one_pattern().space;
    return OnticPermutation::from_labels(space, {{"+1", "+2"}, {"+2", "+3"}, {"+3", "+1"},
                                                 {"-1", "-2"}, {"-2", "-3"}, {"-3", "-1"}});
}

OnticPermutation table_one_pi() {
    const OnticSpace space = table_one_pattern().space;
    return OnticPermutation::from_labels(space, {{"+0", "-0"}, {"-0", "+0"}, {"+1", "-1"}, {"-1", "+1"},
                                                 {"+2", "-3"}, {"-3", "+2"}, {"+3", "-2"}, {"-2", "+3"}});
}

OnticPermutation epsilon_flip(const OnticSpace& space) {
    std::vector<std::size_t> image(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
        std::string label = space.label(i);
        if (label.empty() || (label[0] != '+' && label[0] != '-'))
            throw InvalidArgumentError("epsilon flip needs (eps, a) labels");
        label[0] = label[0] == '+' ? '-' : '+';
        image[i] = space.index_of(label);
    }
    return OnticPermutation(space, std::move(image));
}

namespace {

void require_stabilizer_model(const SubtheoryModel& model) {
    if (!(model.rep().space() == table_one_pattern().space) || model.states().size() != 6)
        throw ContractError("the universal NOT check needs the 8-point stabilizer model");
    for (const char* axis : {"x", "y", "z"}) {
        const auto& names = model.bases();
        if (std::none_of(names.begin(), names.end(), [axis](const ModelBasis& b) { return b.name == axis; }))
            throw ContractError(std::string("the universal NOT check needs the stabilizer basis ") + axis);
        const auto& b = model.basis(axis);
        const Vec3 expected = axis[0] == 'x' ? Vec3::UnitX() : axis[0] == 'y' ? Vec3::UnitY() : Vec3::UnitZ();
        if ((b.basis.direction().vec() - expected).norm() > kTolerance)
            throw ContractError("model basis " + b.name + " is not the stabilizer axis");
    }
}

}  // namespace

bool universal_not_check(const SubtheoryModel& model) {
    require_stabilizer_model(model);
    const auto flip = epsilon_flip(model.rep().space());
    for (const auto& s : model.states()) {
        const HermitianOp flipped = bloch_to_density(-density_to_bloch(s.rho));
        const auto k = model.match_state(flipped);
        if (!k) return false;
        const auto moved = pushforward(distribution(model.rep(), s.rho), flip);
        const auto target = distribution(model.rep(), model.states()[*k].rho);
        for (std::size_t i = 0; i < moved.values.size(); ++i)
            if (std::abs(moved.values[i] - target.values[i]) > kTolerance) return false;
    }
    return true;
}

bool not_gate_is_not_unitary(const SubtheoryModel& model) {
    for (const auto& g : model.gates()) {
        bool inverts_all = true;
        for (const auto& s : model.states()) {
            const HermitianOp image = s.rho.conjugated(g.unitary);
            const HermitianOp flipped = bloch_to_density(-density_to_bloch(s.rho));
            inverts_all = inverts_all && trace_distance(image, flipped) < kStateMatchTol;
        }
        if (inverts_all) return false;
    }
    return true;
}

CircuitResult run_circuit(const SubtheoryModel& model, const std::string& initial,
                          const std::vector<std::string>& gates, const std::string& measure) {
    const auto& start = model.state(initial);
    const auto& basis = model.basis(measure).basis;
    std::vector<const ModelGate*> sequence;
    for (const auto& name : gates) sequence.push_back(&model.gate(name));

    OnticDistribution dist = distribution(model.rep(), start.rho);
    HermitianOp rho = start.rho;
    for (const auto* g : sequence) {
        dist = pushforward(dist, g->permutation);
        rho = rho.conjugated(g->unitary);
    }
    CircuitResult out;
    for (int gamma : {1, -1}) {
        const auto ind = indicator(model.rep(), basis.element(gamma));
        double p = 0.0;
        for (std::size_t i = 0; i < ind.size(); ++i) p += dist.values[i] * ind[i];
        out.ontic.push_back(p);
        out.quantum.push_back(trace_product(rho, basis.element(gamma)));
        out.max_difference = std::max(out.max_difference, std::abs(p - out.quantum.back()));
    }
    out.agree = out.max_difference <= kCircuitAgreementTol;
    return out;
}

std::vector<std::string> parse_circuit(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

CMatrix named_gate(const std::string& name) {
    const std::string key = normalize_gate(name);
    const Complex i(0, 1);
    CMatrix m(2, 2);
    if (key == "I") return CMatrix::Identity(2, 2);
    if (key == "X") return pauli_x();
    if (key == "Y") return pauli_y();
    if (key == "Z") return pauli_z();
    if (key == "H") {
        m << 1, 1, 1, -1;
        return m / std::sqrt(2.0);
    }
    if (key == "P") {
        m << 1, 0, 0, i;
        return m;
    }
    if (key == "PDG") {
        m << 1, 0, 0, -i;
        return m;
    }
    if (key == "GAMMA") {
        const double a = 2 * std::numbers::pi / 3;
        m << std::exp(i * a), 0, 0, std::exp(-i * a);
        return m;
    }
    if (key == "PI") return rotation_unitary(BlochVector(0, 1, 0), std::numbers::pi);
    throw UnknownNameError("unknown gate '" + name + "'");
}

std::vector<NamedUnitary> clifford_rotations() {
    constexpr double pi = std::numbers::pi;
    std::vector<NamedUnitary> out;
    out.push_back({"I", CMatrix::Identity(2, 2)});
    const std::pair<const char*, BlochVector> faces[] = {
        {"x", BlochVector(1, 0, 0)}, {"y", BlochVector(0, 1, 0)}, {"z", BlochVector(0, 0, 1)}};
    for (const auto& [name, axis] : faces)
        for (int quarter = 1; quarter <= 3; ++quarter)
            out.push_back({std::string("R") + name + std::to_string(90 * quarter), rotation_unitary(axis, quarter * pi / 2)});
    const std::pair<const char*, BlochVector> edges[] = {
        {"(x+y)", BlochVector(1, 1, 0)}, {"(x-y)", BlochVector(1, -1, 0)}, {"(x+z)", BlochVector(1, 0, 1)},
        {"(x-z)", BlochVector(1, 0, -1)}, {"(y+z)", BlochVector(0, 1, 1)}, {"(y-z)", BlochVector(0, 1, -1)}};
    for (const auto& [name, axis] : edges) out.push_back({std::string("R") + name + "180", rotation_unitary(axis, pi)});
    for (int sx : {1, -1}) {
        for (int sy : {1, -1}) {
            const std::string name = std::string("R(") + (sx > 0 ? "+" : "-") + "x" + (sy > 0 ? "+" : "-") + "y+z)";
            for (int third = 1; third <= 2; ++third)
                out.push_back({name + std::to_string(120 * third),
                               rotation_unitary(BlochVector(sx, sy, 1), third * 2 * pi / 3)});
        }
    }
    return out;
}

SubtheoryModel make_model(const FamilySpec& spec) {
    std::vector<QubitBasis> bases = family_bases(spec);
    std::vector<ModelBasis> named;
    if (spec.kind == FamilyKind::Stabilizer) {
        named = {{"x", bases[0]}, {"y", bases[1]}, {"z", bases[2]}};
    } else if (spec.kind == FamilyKind::Single) {
        named = {{"z", bases[0]}};
    } else {
        for (std::size_t j = 0; j < bases.size(); ++j) named.push_back({"b" + std::to_string(j + 1), bases[j]});
    }
    SubtheoryModel model(to_string(spec.kind), build_family_frame(spec), std::move(named));
    for (const char* gate : {"I", "X", "Y", "Z", "H", "P", "PDG", "GAMMA", "PI"}) model.try_register(gate, named_gate(gate));
    return model;
}

SubtheoryModel stabilizer_model() { return make_model({FamilyKind::Stabilizer, 0, 0, {}}); }

}  // namespace qpr
