#include "steinlab/serialize.hpp"

#include <fstream>

namespace steinlab {

using nlohmann::json;

json matrix_to_json(const ComplexMatrix& m) {
    json entries = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            entries.push_back({m(i, j).real(), m(i, j).imag()});
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
        throw input_error("matrix json: expected {rows, cols, entries}");
    const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
    if (rows < 0 || cols < 0) throw input_error("matrix json: negative dimensions");
    const json& entries = j.at("entries");
    if (!entries.is_array() || static_cast<Eigen::Index>(entries.size()) != rows * cols)
        throw input_error("matrix json: entries must hold rows*cols [re, im] pairs");

    ComplexMatrix m(rows, cols);
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j2 = 0; j2 < cols; ++j2, ++idx) {
            const json& e = entries[static_cast<std::size_t>(idx)];
            if (!e.is_array() || e.size() != 2)
                throw input_error("matrix json: each entry must be an [re, im] pair");
            m(i, j2) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    if (!all_finite(m)) throw input_error("matrix json: entries must be finite");
    return m;
}

json pair_to_json(const InputPair& pair) {
    return json{{"a", matrix_to_json(pair.a)}, {"b", matrix_to_json(pair.b)}};
}

InputPair pair_from_json(const json& j) {
    if (!j.is_object() || !j.contains("a") || !j.contains("b"))
        throw input_error("pair json: expected {a, b}");
    InputPair pair{matrix_from_json(j.at("a")), matrix_from_json(j.at("b"))};
    pair.validate();
    return pair;
}

json spectrum_to_json(const Spectrum& s) {
    json values = json::array();
    for (const Complex& v : s.eigenvalues()) values.push_back({v.real(), v.imag()});
    return json{{"eigenvalues", std::move(values)}};
}

Spectrum spectrum_from_json(const json& j) {
    if (!j.is_object() || !j.contains("eigenvalues"))
        throw input_error("spectrum json: expected {eigenvalues}");
    std::vector<Complex> values;
    for (const json& e : j.at("eigenvalues")) {
        if (!e.is_array() || e.size() != 2)
            throw input_error("spectrum json: eigenvalues must be [re, im] pairs");
        values.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return Spectrum(std::move(values));
}

json solution_to_json(const SteinSolution& s) {
    return json{{"l", matrix_to_json(s.factor_l)},
                {"log_kappa", s.log_kappa},
                {"residual_rel", s.residual_rel},
                {"iterations", s.iterations}};
}

SteinSolution solution_from_json(const json& j) {
    SteinSolution s;
    s.factor_l = matrix_from_json(j.at("l"));
    s.log_kappa = j.at("log_kappa").get<double>();
    s.residual_rel = j.at("residual_rel").get<double>();
    s.iterations = j.at("iterations").get<int>();
    return s;
}

json transform_to_json(const InTransform& t) {
    return json{{"t", matrix_to_json(t.t)},
                {"a_tilde", matrix_to_json(t.a_tilde)},
                {"b_tilde", matrix_to_json(t.b_tilde)},
                {"log_kappa_t", t.log_kappa_t}};
}

json bound_report_to_json(const BoundReport& r) {
    json j;
    for (const auto& [name, value] : r.entries) j[name] = value;
    j["applicable"] = json::array();
    for (const std::string& name : r.applicable) j["applicable"].push_back(name);
    return j;
}

json noise_to_json(const NoiseModel& m) {
    return json{{"kind", m.kind_name()},
                {"param", m.param},
                {"s_min", m.s_min},
                {"s_max", m.s_max}};
}

NoiseModel noise_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "white") return NoiseModel::white(j.value("s_min", 1.0));
    if (kind == "ar1") return NoiseModel::ar1(j.at("param").get<double>());
    if (kind == "ma1") return NoiseModel::ma1(j.at("param").get<double>());
    throw input_error("noise json: custom models cannot be deserialized without an autocovariance rule");
}

json record_to_json(const SampleRecord& r) {
    json j{{"index", r.index},
           {"log_kappa", r.log_kappa},
           {"rejections", r.rejections},
           {"aux", r.aux}};
    if (r.bound_log) j["bound"] = *r.bound_log;
    return j;
}

json summary_to_json(const QuantileSummary& s) {
    json j{{"n", s.n},
           {"probes", s.probes},
           {"values", s.values},
           {"iq_distance", s.iq_distance},
           {"count", s.count}};
    if (s.extra_min) j["min"] = *s.extra_min;
    if (s.extra_bound) j["bound"] = *s.extra_bound;
    return j;
}

namespace {

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw input_error("cannot parse " + path + ": " + e.what());
    }
    return j;
}

}  // namespace

InputPair load_pair_file(const std::string& path) { return pair_from_json(load_json_file(path)); }

Spectrum load_spectrum_file(const std::string& path) {
    return spectrum_from_json(load_json_file(path));
}

}  // namespace steinlab
