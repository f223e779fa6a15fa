#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qpr/qubit_families.hpp"

namespace qpr {

/// A unitary does not map the model's state set onto itself.
class ContractError : public Error {
public:
    using Error::Error;
};
class SupervenienceError : public Error {
public:
    using Error::Error;
};
class UnknownNameError : public Error {
public:
    using Error::Error;
};

/** Bijection on an ontic space: point i is sent to image[i]. */
class OnticPermutation {
public:
    OnticPermutation(OnticSpace space, std::vector<std::size_t> image);
    static OnticPermutation identity(const OnticSpace& space);
    /// From (source label, target label) pairs; unlisted points are fixed.
    static OnticPermutation from_labels(const OnticSpace& space,
                                        const std::vector<std::pair<std::string, std::string>>& moves);

    const OnticSpace& space() const { return space_; }
    std::size_t operator()(std::size_t point) const { return image_.at(point); }
    const std::vector<std::size_t>& image() const { return image_; }
    OnticPermutation inverse() const;
    /// (this o other)(l) = this(other(l)): `other` acts first.
    OnticPermutation compose(const OnticPermutation& other) const;
    bool operator==(const OnticPermutation&) const = default;
    /// "+1->+2, ..." listing of moved points.
    std::string describe() const;

private:
    OnticSpace space_;
    std::vector<std::size_t> image_;
};

/// (pi . mu)(l) = mu(pi^-1(l)).
OnticDistribution pushforward(const OnticDistribution& dist, const OnticPermutation& perm);

struct ModelState {
    std::string label;
    HermitianOp rho;
};

struct ModelBasis {
    std::string name;
    QubitBasis basis;
};

struct ModelGate {
    std::string name;
    CMatrix unitary;
    OnticPermutation permutation;
};

/**
 * A non-negative subtheory: a representation, the states of its non-negative
 * bases and the gates registered on it. Every registered gate supervenes on
 * its permutation.
 */
class SubtheoryModel {
public:
    SubtheoryModel(std::string name, QuasiRep rep, std::vector<ModelBasis> bases);

    const std::string& name() const { return name_; }
    const QuasiRep& rep() const { return rep_; }
    const std::vector<ModelState>& states() const { return states_; }
    const std::vector<ModelBasis>& bases() const { return bases_; }
    const std::vector<ModelGate>& gates() const { return gates_; }

    /// Throws SupervenienceError unless `perm` effects `unitary`.
    void register_gate(const std::string& name, const CMatrix& unitary, const OnticPermutation& perm);
    /// Finds a permutation and registers it; false if U does not permute the
    /// states or no permutation exists.
    bool try_register(const std::string& name, const CMatrix& unitary);

    /// Accepts "x+", "x-", "x−" (U+2212) and family labels "b1+".
    const ModelState& state(const std::string& label) const;
    const ModelBasis& basis(const std::string& name) const;
    const ModelGate& gate(const std::string& name) const;
    bool has_gate(const std::string& name) const;
    /// Index of the model state equal to rho (trace distance < 1e-9), if any.
    std::optional<std::size_t> match_state(const HermitianOp& rho) const;

private:
    std::string name_;
    QuasiRep rep_;
    std::vector<ModelBasis> bases_;
    std::vector<ModelState> states_;
    std::vector<ModelGate> gates_;
};

/// True iff pushforward(mu_rho, perm) = mu_{U rho U^dagger} for every model
/// state within tol. ContractError if U does not permute the states.
bool supervenes(const OnticPermutation& perm, const CMatrix& unitary, const SubtheoryModel& model,
                double tol = kTolerance);

struct PermutationSearch {
    /// False when U does not map the state set onto itself.
    bool precondition_met = false;
    std::string note;
    /// Hits in lexicographic order of the image vector.
    std::vector<OnticPermutation> hits;

    bool found() const { return !hits.empty(); }
    const OnticPermutation& first() const { return hits.front(); }
};

/// Backtracking over point assignments compatible with every state's values.
/// Stops at the first hit unless all_hits is set.
PermutationSearch find_permutation(const CMatrix& unitary, const SubtheoryModel& model, bool all_hits = false,
                                   double tol = kTolerance);

/// Table I permutation effecting Gamma: (eps, 0) fixed, (eps, a) -> (eps, a + 1) on a = 1..3.
OnticPermutation table_one_gamma();
/// Table I permutation effecting Pi: (eps, 0) -> (-eps, 0), (eps, 1) -> (-eps, 1),
/// (eps, 2) -> (-eps, 3), (eps, 3) -> (-eps, 2).
OnticPermutation table_one_pi();

/// (eps, a) -> (-eps, a) on the 8-point space.
OnticPermutation epsilon_flip(const OnticSpace& space);

/// The eps-flip sends mu_rho to mu_rho' with r' = -r for all six stabilizer
/// states. ContractError unless the model is the 8-point stabilizer model.
bool universal_not_check(const SubtheoryModel& model);

/// True when no registered gate acts as r -> -r on all model states.
bool not_gate_is_not_unitary(const SubtheoryModel& model);

struct CircuitResult {
    std::vector<double> ontic;
    std::vector<double> quantum;
    double max_difference = 0.0;
    bool agree = false;
};

/// Gates apply left to right. Outcome order is (+, -) of the measured basis.
CircuitResult run_circuit(const SubtheoryModel& model, const std::string& initial,
                          const std::vector<std::string>& gates, const std::string& measure);
/// Splits a whitespace-separated circuit string.
std::vector<std::string> parse_circuit(const std::string& text);

/// Named single-qubit gates: I X Y Z H P PDG (and GAMMA, PI as d3 rotations).
CMatrix named_gate(const std::string& name);

struct NamedUnitary {
    std::string name;
    CMatrix unitary;
};
/// The 24 rotations of the octahedral group as SU(2) elements.
std::vector<NamedUnitary> clifford_rotations();

/// Model of a family: its frame, its bases (named x/y/z for the stabilizer
/// family, b1, b2, ... otherwise) and every standard gate that supervenes.
SubtheoryModel make_model(const FamilySpec& spec);
SubtheoryModel stabilizer_model();

}  // namespace qpr
