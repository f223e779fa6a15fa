#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qpr/certifier.hpp"
#include "qpr/qudit_tools.hpp"

namespace qpr {

using Json = nlohmann::ordered_json;

/// Malformed or invalid input document.
class DocumentError : public Error {
public:
    using Error::Error;
};

/** A real number labelled with the arithmetic that produced it. */
struct TaggedNumber {
    ArithmeticMode mode = ArithmeticMode::Float;
    double value = 0.0;
    Rational exact;

    static TaggedNumber of(double v) { return {ArithmeticMode::Float, v, Rational(0)}; }
    static TaggedNumber of(const Rational& r) { return {ArithmeticMode::Exact, to_double(r), r}; }
    bool operator==(const TaggedNumber& o) const;
};

/// {"mode": "float", "value": 0.25} or {"mode": "exact", "value": "1/4"}.
Json to_json(const TaggedNumber& n);
TaggedNumber tagged_from_json(const Json& j);

/**
 * {"version": 1, "dim": d, "bases": [...]} where each basis is
 * {"bloch": [x, y, z]} (qubits) or {"vectors": [[{"re": .., "im": ..}, ...], ...]}.
 */
struct BasesDocument {
    int version = 1;
    int dim = 2;
    std::vector<QuditBasis> bases;
    /// Bloch directions for qubit documents, in input order.
    std::vector<BlochVector> bloch;

    std::vector<QubitBasis> qubit_bases() const;
    BasisFamily family() const { return BasisFamily(dim, bases); }
};

/// Throws DocumentError (bad JSON or schema) or the operator_core errors.
BasesDocument parse_bases_document(const std::string& text);
Json to_json(const BasesDocument& doc);
Json bases_json(const std::vector<QubitBasis>& bases);

struct CertificateDocument {
    int version = 1;
    std::string verdict;
    ArithmeticMode mode = ArithmeticMode::Float;
    std::vector<std::string> points;
    std::vector<TaggedNumber> q;
    std::vector<std::string> rows;
    std::vector<TaggedNumber> farkas;
    TaggedNumber max_constraint_residual;
    bool witness_verified = false;
    bool symmetrized = false;
    bool frame_verified = false;
    TaggedNumber frame_deviation;
    std::string frame_note;
    std::string input_sha256;

    bool operator==(const CertificateDocument&) const = default;
};

CertificateDocument make_certificate_document(const FeasibilityCertificate& cert, const FeasibilityProblem& prob,
                                              const std::string& input_text);
Json to_json(const CertificateDocument& doc);
CertificateDocument certificate_from_json(const Json& j);

/// Lower-case hex SHA-256 of `data`.
std::string sha256_hex(const std::string& data);

/// F and G operators of a frame as {"label", "F": {"mode", "re", "im"}, "G": {...}}.
Json frame_json(const QuasiRep& rep);

}  // namespace qpr
