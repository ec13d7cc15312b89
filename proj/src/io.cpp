#include "slbi/io.hpp"

#include "slbi/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace slbi::io {

namespace {

std::vector<std::vector<double>> read_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) row.push_back(parse_double(field, line_no));
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError(path + ": expected " + std::to_string(rows.front().size()) + " fields", line_no);
        rows.push_back(std::move(row));
    }
    return rows;
}

Json vector_json(const Vector& v) {
    Json a = Json::array();
    for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Json matrix_json(const Matrix& m) {
    Json a = Json::array();
    for (Index i = 0; i < m.rows(); ++i) a.push_back(vector_json(m.row(i).transpose()));
    return a;
}

// Non-finite values have no JSON literal; they are written as null.
Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Vector json_vector(const Json& j, const char* what) {
    if (!j.is_array()) throw InvalidMatrix(std::string(what) + " must be an array");
    Vector v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw InvalidMatrix(std::string(what) + " has a non-numeric entry");
        v(static_cast<Index>(i)) = j[i].get<double>();
    }
    return v;
}

Matrix json_matrix(const Json& j, const char* what, Index cols_if_empty) {
    if (!j.is_array()) throw InvalidMatrix(std::string(what) + " must be an array of rows");
    if (j.empty()) return Matrix(0, cols_if_empty);
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    Matrix m(static_cast<Index>(j.size()), static_cast<Index>(cols));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != cols) throw InvalidMatrix(std::string(what) + " rows are ragged");
        m.row(static_cast<Index>(i)) = json_vector(j[i], what).transpose();
    }
    return m;
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s, std::size_t line) {
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    while (*end == ' ' || *end == '\t') ++end;
    if (end == begin || *end != '\0' || errno == ERANGE) throw ParseError("bad number '" + s + "'", line);
    return v;
}

Matrix read_matrix_csv(const std::string& path) {
    const auto rows = read_rows(path);
    if (rows.empty()) throw InvalidMatrix(path + " is empty");
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    require_finite(m, path.c_str());
    return m;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
    std::ostringstream os;
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << format_double(m(i, j));
        os << '\n';
    }
    write_text(path, os.str());
}

Vector read_vector_csv(const std::string& path) {
    const Matrix m = read_matrix_csv(path);
    if (m.cols() == 1) return m.col(0);
    if (m.rows() == 1) return m.row(0).transpose();
    throw InvalidMatrix(path + " is not a vector");
}

void write_vector_csv(const std::string& path, const Vector& v) { write_matrix_csv(path, v); }

Problem read_problem_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    const fs::path base(dir);
    Matrix x = read_matrix_csv((base / "X.csv").string());
    Vector y = read_vector_csv((base / "y.csv").string());
    Matrix d = read_matrix_csv((base / "D.csv").string());
    if (fs::exists(base / "truth.csv")) {
        Vector beta = read_vector_csv((base / "truth.csv").string());
        double sigma = 1.0;
        if (fs::exists(base / "sigma.txt")) sigma = read_vector_csv((base / "sigma.txt").string())(0);
        return Problem(std::move(x), std::move(y), std::move(d), std::move(beta), sigma);
    }
    return Problem(std::move(x), std::move(y), std::move(d));
}

Problem problem_from_json(const Json& j) {
    if (!j.is_object()) throw InvalidMatrix("problem JSON must be an object");
    for (const char* key : {"X", "y", "D"})
        if (!j.contains(key)) throw InvalidMatrix(std::string("problem JSON lacks '") + key + "'");
    Matrix x = json_matrix(j["X"], "X", 0);
    Vector y = json_vector(j["y"], "y");
    Matrix d = json_matrix(j["D"], "D", x.cols());
    if (j.contains("truth") && !j["truth"].is_null()) {
        const Json& t = j["truth"];
        Vector beta = json_vector(t.at("beta"), "truth.beta");
        const double sigma = t.contains("sigma") ? t["sigma"].get<double>() : 1.0;
        return Problem(std::move(x), std::move(y), std::move(d), std::move(beta), sigma);
    }
    return Problem(std::move(x), std::move(y), std::move(d));
}

Json problem_to_json(const Problem& problem) {
    Json j;
    j["X"] = matrix_json(problem.X());
    j["y"] = vector_json(problem.y());
    j["D"] = matrix_json(problem.D());
    if (problem.truth()) j["truth"] = {{"beta", vector_json(problem.truth()->beta)}, {"sigma", problem.truth()->sigma}};
    return j;
}

Problem read_problem_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw ParseError(path + ": " + e.what(), 0);
    }
    try {
        return problem_from_json(j);
    } catch (const Json::exception& e) {
        throw InvalidMatrix(path + ": " + e.what());
    }
}

void write_problem_json(const std::string& path, const Problem& problem) {
    write_text(path, problem_to_json(problem).dump(1) + "\n");
}

void write_path_csv(std::ostream& out, const std::vector<PathPoint>& points) {
    out << "k,t,loss";
    if (!points.empty()) {
        for (Index i = 0; i < points.front().beta.size(); ++i) out << ",beta_" << i + 1;
        for (Index i = 0; i < points.front().gamma.size(); ++i) out << ",gamma_" << i + 1;
    }
    out << '\n';
    for (const PathPoint& pt : points) {
        out << pt.k << ',' << format_double(pt.t) << ',' << format_double(pt.loss);
        for (Index i = 0; i < pt.beta.size(); ++i) out << ',' << format_double(pt.beta(i));
        for (Index i = 0; i < pt.gamma.size(); ++i) out << ',' << format_double(pt.gamma(i));
        out << '\n';
    }
}

Json path_to_json(const std::vector<PathPoint>& points, const Hyperparams* hyper) {
    Json j;
    if (hyper) j["hyper"] = {{"nu", hyper->nu}, {"kappa", hyper->kappa}, {"alpha", hyper->alpha.value_or(0.0)}};
    Json pts = Json::array();
    for (const PathPoint& pt : points)
        pts.push_back({{"k", pt.k}, {"t", pt.t}, {"loss", pt.loss}, {"beta", vector_json(pt.beta)},
                       {"gamma", vector_json(pt.gamma)}});
    j["points"] = std::move(pts);
    return j;
}

Json segments_to_json(const std::vector<IssSegment>& segments) {
    Json a = Json::array();
    for (const IssSegment& s : segments) {
        Json active = Json::array();
        for (Index j : s.active) active.push_back(j + 1);
        a.push_back({{"t_start", s.t_start}, {"t_end", number_or_null(s.t_end)}, {"active", active},
                     {"signs", s.signs}, {"gamma", vector_json(s.gamma)}, {"beta", vector_json(s.beta)}});
    }
    return a;
}

void write_entry_times_csv(std::ostream& out, const EntryTimes& entry) {
    out << "coordinate,entry_time\n";
    for (Index j = 0; j < entry.times.size(); ++j) out << j + 1 << ',' << format_double(entry.times(j)) << '\n';
}

Json entry_times_to_json(const EntryTimes& entry) {
    Json a = Json::array();
    for (Index j = 0; j < entry.times.size(); ++j) a.push_back(number_or_null(entry.times(j)));
    return a;
}

Json report_to_json(const ConditionReport& report) {
    Json irr = Json::array();
    for (const auto& [nu, value] : report.irr)
        irr.push_back({{"nu", nu}, {"irr", value}, {"eta_implied", 1.0 - value}});
    return {{"lambda_rsc", report.lambda_rsc},
            {"rsc_nontrivial", report.rsc_nontrivial},
            {"nu", report.nu},
            {"lambda_h", report.lambda_h},
            {"irr", irr},
            {"ic0", report.ic0},
            {"ic1", report.ic1},
            {"spectral",
             {{"lambda_d", report.spectral.lambda_d},
              {"Lambda_d", report.spectral.Lambda_d},
              {"Lambda_x", report.spectral.Lambda_x}}},
            {"r_prime", report.r_prime}};
}

void write_irr_curve_csv(std::ostream& out, const IrrCurve& curve) {
    out << "nu,irr,ic0,ic1,status\n";
    for (const IrrCurveRow& row : curve.rows) {
        std::string status = row.status;
        for (char& c : status)
            if (c == ',' || c == '\n') c = ';';
        out << format_double(row.nu) << ',' << (row.irr ? format_double(*row.irr) : "") << ','
            << format_double(curve.ic0) << ',' << format_double(curve.ic1) << ',' << status << '\n';
    }
}

Json irr_curve_to_json(const IrrCurve& curve) {
    Json rows = Json::array();
    for (const IrrCurveRow& row : curve.rows)
        rows.push_back({{"nu", row.nu}, {"irr", row.irr ? Json(*row.irr) : Json(nullptr)}, {"status", row.status}});
    Json j = {{"rows", rows}, {"ic0", curve.ic0}, {"ic1", curve.ic1}};
    j["first_below_one"] = curve.first_below_one ? Json(curve.rows[*curve.first_below_one].nu) : Json(nullptr);
    return j;
}

Json consistency_to_json(const ConsistencyReport& report, const StoppingRule& rule) {
    return {{"tau_bar", rule.tau_bar},
            {"k_bar", report.k_bar},
            {"evaluated_k", report.evaluated_k},
            {"eta", rule.inputs.eta},
            {"sigma", rule.inputs.sigma},
            {"no_false_positive", report.no_false_positive},
            {"sign_consistent", report.sign_consistent},
            {"l2_gamma", report.l2_gamma},
            {"l2_beta", report.l2_beta},
            {"l2_beta_projected", report.l2_beta_projected}};
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << "design,nu,kappa,alpha,n_replicates,mean_auc,sd_auc,n_failed\n";
    for (const SummaryRow& r : rows)
        out << r.design << ',' << format_double(r.nu) << ',' << format_double(r.kappa) << ','
            << format_double(r.alpha) << ',' << r.n_replicates << ',' << format_double(r.mean_auc) << ','
            << format_double(r.sd_auc) << ',' << r.n_failed << '\n';
}

Json summary_to_json(const std::vector<SummaryRow>& rows) {
    Json a = Json::array();
    for (const SummaryRow& r : rows)
        a.push_back({{"design", r.design},
                     {"nu", r.nu},
                     {"kappa", r.kappa},
                     {"alpha", number_or_null(r.alpha)},
                     {"n_replicates", r.n_replicates},
                     {"mean_auc", number_or_null(r.mean_auc)},
                     {"sd_auc", number_or_null(r.sd_auc)},
                     {"n_failed", r.n_failed}});
    return a;
}

void write_replicates_csv(std::ostream& out, const std::string& design, const HarnessResult& result,
                          const std::vector<HarnessHyper>& hypers) {
    out << "design,replicate,seed,nu,kappa,alpha,auc,steps,status\n";
    for (const ReplicateRecord& r : result.replicates) {
        const HarnessHyper& h = hypers[r.hyper_index];
        std::string status = r.failed ? r.error : "ok";
        for (char& c : status)
            if (c == ',' || c == '\n') c = ';';
        out << design << ',' << r.replicate << ',' << r.seed << ',' << format_double(h.nu) << ','
            << format_double(h.kappa) << ',' << format_double(r.alpha) << ','
            << (r.failed ? "" : format_double(r.auc)) << ',' << r.steps << ',' << status << '\n';
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace slbi::io
