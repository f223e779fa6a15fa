#include "qpr/documents.hpp"

#include <array>
#include <cstdio>

#include <openssl/evp.h>

namespace qpr {

namespace {

[[noreturn]] void fail(const std::string& what) { throw DocumentError(what); }

const Json& require(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) fail(where + ": missing \"" + key + "\"");
    return j.at(key);
}

double number(const Json& j, const std::string& where) {
    if (!j.is_number()) fail(where + ": expected a number");
    return j.get<double>();
}

CVector parse_vector(const Json& j, int dim, const std::string& where) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        fail(where + ": expected " + std::to_string(dim) + " complex entries");
    CVector v(dim);
    for (int k = 0; k < dim; ++k) {
        const Json& c = j[k];
        std::string at = where + "[" + std::to_string(k) + "]";
        v[k] = Complex(number(require(c, "re", at), at + ".re"), number(require(c, "im", at), at + ".im"));
    }
    return v;
}

Json matrix_json(const CMatrix& m) {
    Json re = Json::array();
    Json im = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json rr = Json::array();
        Json ir = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            rr.push_back(m(r, c).real());
            ir.push_back(m(r, c).imag());
        }
        re.push_back(rr);
        im.push_back(ir);
    }
    return Json{{"mode", "float"}, {"re", re}, {"im", im}};
}

std::vector<TaggedNumber> tag_all(const std::vector<double>& v, const std::vector<Rational>& exact,
                                  ArithmeticMode mode) {
    std::vector<TaggedNumber> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(mode == ArithmeticMode::Exact && i < exact.size() ? TaggedNumber::of(exact[i])
                                                                         : TaggedNumber::of(v[i]));
    return out;
}

Json labelled(const std::vector<std::string>& labels, const std::vector<TaggedNumber>& values) {
    Json out = Json::object();
    for (std::size_t i = 0; i < values.size(); ++i) out[labels.at(i)] = to_json(values[i]);
    return out;
}

void unlabel(const Json& j, std::vector<std::string>& labels, std::vector<TaggedNumber>& values) {
    if (!j.is_object()) fail("witness: expected an object");
    for (const auto& [key, value] : j.items()) {
        labels.push_back(key);
        values.push_back(tagged_from_json(value));
    }
}

}  // namespace

bool TaggedNumber::operator==(const TaggedNumber& o) const {
    if (mode != o.mode) return false;
    return mode == ArithmeticMode::Exact ? exact == o.exact : value == o.value;
}

Json to_json(const TaggedNumber& n) {
    if (n.mode == ArithmeticMode::Exact) return Json{{"mode", "exact"}, {"value", to_string(n.exact)}};
    return Json{{"mode", "float"}, {"value", n.value}};
}

TaggedNumber tagged_from_json(const Json& j) {
    const Json& m = require(j, "mode", "number");
    const Json& v = require(j, "value", "number");
    if (!m.is_string()) fail("number: mode must be a string");
    ArithmeticMode mode;
    try {
        mode = parse_mode(m.get<std::string>());
    } catch (const Error& e) {
        fail(std::string("number: ") + e.what());
    }
    if (mode == ArithmeticMode::Exact) {
        if (!v.is_string()) fail("number: exact values are \"num/den\" strings");
        try {
            return TaggedNumber::of(parse_rational(v.get<std::string>()));
        } catch (const std::exception& e) {
            fail(std::string("number: ") + e.what());
        }
    }
    return TaggedNumber::of(number(v, "number"));
}

std::vector<QubitBasis> BasesDocument::qubit_bases() const {
    if (dim != 2) throw DimensionError("qubit bases requested from a dim " + std::to_string(dim) + " document");
    std::vector<QubitBasis> out;
    out.reserve(bloch.size());
    for (const auto& r : bloch) out.emplace_back(r);
    return out;
}

BasesDocument parse_bases_document(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        fail(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) fail("document: expected an object");
    BasesDocument doc;
    if (j.contains("version")) {
        if (!j["version"].is_number_integer()) fail("version: expected an integer");
        doc.version = j["version"].get<int>();
        if (doc.version != 1) fail("version: unsupported " + std::to_string(doc.version));
    }
    if (j.contains("dim")) {
        if (!j["dim"].is_number_integer()) fail("dim: expected an integer");
        doc.dim = j["dim"].get<int>();
    }
    if (doc.dim < 2) fail("dim: must be at least 2");
    const Json& bases = require(j, "bases", "document");
    if (!bases.is_array() || bases.empty()) fail("bases: expected a non-empty list");

    for (std::size_t i = 0; i < bases.size(); ++i) {
        const Json& b = bases[i];
        std::string where = "bases[" + std::to_string(i) + "]";
        if (b.is_object() && b.contains("bloch")) {
            if (doc.dim != 2) fail(where + ": bloch entries need dim 2");
            const Json& r = b["bloch"];
            if (!r.is_array() || r.size() != 3) fail(where + ".bloch: expected [x, y, z]");
            BlochVector v(number(r[0], where), number(r[1], where), number(r[2], where));
            QubitBasis qb = basis_from_bloch(v);
            doc.bloch.push_back(qb.direction());
            doc.bases.push_back(QuditBasis::from_qubit(qb));
        } else if (b.is_object() && b.contains("vectors")) {
            const Json& vs = b["vectors"];
            if (!vs.is_array() || static_cast<int>(vs.size()) != doc.dim)
                fail(where + ".vectors: expected " + std::to_string(doc.dim) + " vectors");
            std::vector<CVector> vectors;
            for (int k = 0; k < doc.dim; ++k)
                vectors.push_back(parse_vector(vs[k], doc.dim, where + ".vectors[" + std::to_string(k) + "]"));
            QuditBasis qb = QuditBasis::from_vectors(vectors);
            if (doc.dim == 2) doc.bloch.push_back(density_to_bloch(qb[0]));
            doc.bases.push_back(std::move(qb));
        } else {
            fail(where + ": expected {\"bloch\": ...} or {\"vectors\": ...}");
        }
    }
    return doc;
}

Json bases_json(const std::vector<QubitBasis>& bases) {
    Json list = Json::array();
    for (const auto& b : bases) {
        const auto& r = b.direction();
        list.push_back(Json{{"bloch", {r.x(), r.y(), r.z()}}});
    }
    return list;
}

Json to_json(const BasesDocument& doc) {
    Json out{{"version", doc.version}, {"dim", doc.dim}};
    if (doc.dim == 2) {
        out["bases"] = bases_json(doc.qubit_bases());
        return out;
    }
    Json list = Json::array();
    for (const auto& basis : doc.bases) {
        Json vectors = Json::array();
        for (const auto& p : basis.elements()) {
            Eigen::SelfAdjointEigenSolver<CMatrix> es(p.matrix());
            CVector v = es.eigenvectors().col(p.dim() - 1);
            Json entries = Json::array();
            for (Eigen::Index k = 0; k < v.size(); ++k)
                entries.push_back(Json{{"re", v[k].real()}, {"im", v[k].imag()}});
            vectors.push_back(entries);
        }
        list.push_back(Json{{"vectors", vectors}});
    }
    out["bases"] = list;
    return out;
}

CertificateDocument make_certificate_document(const FeasibilityCertificate& cert, const FeasibilityProblem& prob,
                                              const std::string& input_text) {
    CertificateDocument doc;
    doc.verdict = to_string(cert.verdict);
    doc.mode = cert.mode;
    doc.points = cert.space.ontic_space().labels();
    if (cert.feasible()) {
        doc.q = tag_all(cert.q, cert.q_exact, cert.mode);
    } else {
        doc.rows = prob.row_labels;
        doc.farkas = tag_all(cert.farkas, cert.farkas_exact, cert.mode);
    }
    doc.max_constraint_residual = TaggedNumber::of(cert.residual);
    doc.witness_verified = cert.witness_verified;
    doc.symmetrized = cert.symmetrized;
    doc.frame_verified = cert.frame_verified;
    doc.frame_deviation = TaggedNumber::of(cert.frame_deviation);
    doc.frame_note = cert.frame_note;
    doc.input_sha256 = sha256_hex(input_text);
    return doc;
}

Json to_json(const CertificateDocument& doc) {
    Json out{{"version", doc.version}, {"verdict", doc.verdict}, {"mode", to_string(doc.mode)}};
    out["points"] = doc.points;
    if (doc.verdict == "feasible")
        out["witness"] = Json{{"q", labelled(doc.points, doc.q)}};
    else
        out["witness"] = Json{{"farkas", labelled(doc.rows, doc.farkas)}};
    out["residuals"] = Json{{"max_constraint_residual", to_json(doc.max_constraint_residual)},
                            {"frame_deviation", to_json(doc.frame_deviation)}};
    out["witness_verified"] = doc.witness_verified;
    out["symmetrized"] = doc.symmetrized;
    out["frame_verified"] = doc.frame_verified;
    out["frame_note"] = doc.frame_note;
    out["input_sha256"] = doc.input_sha256;
    return out;
}

CertificateDocument certificate_from_json(const Json& j) {
    CertificateDocument doc;
    try {
        doc.version = require(j, "version", "certificate").get<int>();
        doc.verdict = require(j, "verdict", "certificate").get<std::string>();
        if (doc.verdict != "feasible" && doc.verdict != "infeasible") fail("verdict: " + doc.verdict);
        doc.mode = parse_mode(require(j, "mode", "certificate").get<std::string>());
        doc.points = require(j, "points", "certificate").get<std::vector<std::string>>();
        const Json& w = require(j, "witness", "certificate");
        if (doc.verdict == "feasible") {
            std::vector<std::string> labels;
            unlabel(require(w, "q", "witness"), labels, doc.q);
            if (labels != doc.points) fail("witness.q: labels do not match points");
        } else {
            unlabel(require(w, "farkas", "witness"), doc.rows, doc.farkas);
        }
        const Json& res = require(j, "residuals", "certificate");
        doc.max_constraint_residual = tagged_from_json(require(res, "max_constraint_residual", "residuals"));
        doc.frame_deviation = tagged_from_json(require(res, "frame_deviation", "residuals"));
        doc.witness_verified = require(j, "witness_verified", "certificate").get<bool>();
        doc.symmetrized = require(j, "symmetrized", "certificate").get<bool>();
        doc.frame_verified = require(j, "frame_verified", "certificate").get<bool>();
        doc.frame_note = require(j, "frame_note", "certificate").get<std::string>();
        doc.input_sha256 = require(j, "input_sha256", "certificate").get<std::string>();
    } catch (const Json::exception& e) {
        fail(std::string("certificate: ") + e.what());
    }
    return doc;
}

std::string sha256_hex(const std::string& data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 failed");
    std::string hex;
    hex.reserve(2 * len);
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

Json frame_json(const QuasiRep& rep) {
    Json out = Json::array();
    for (std::size_t i = 0; i < rep.size(); ++i)
        out.push_back(Json{{"label", rep.space().label(i)},
                           {"F", matrix_json(rep.f(i).matrix())},
                           {"G", matrix_json(rep.g(i).matrix())}});
    return out;
}

}  // namespace qpr
