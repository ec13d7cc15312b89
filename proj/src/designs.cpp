#include "slbi/designs.hpp"

#include "slbi/errors.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

namespace slbi {

Matrix build_fused_1d(Index p) {
    if (p < 2) throw InvalidDimension("fused design needs p >= 2");
    Matrix d = Matrix::Zero(2 * p - 1, p);
    for (Index j = 0; j + 1 < p; ++j) {
        d(j, j) = 1.0;
        d(j, j + 1) = -1.0;
    }
    d.bottomRows(p) = Matrix::Identity(p, p);
    return d;
}

Matrix build_grid_gradient(Index h, Index w, Index channels) {
    if (h < 1 || w < 1 || channels < 1) throw InvalidDimension("grid needs h, w, channels >= 1");
    std::vector<std::pair<Index, Index>> edges;
    for (Index r = 0; r < h; ++r) {
        for (Index c = 0; c < w; ++c) {
            const Index v = r * w + c;
            if (c + 1 < w) edges.emplace_back(v, v + 1);
            if (r + 1 < h) edges.emplace_back(v, v + w);
        }
    }
    const Index e = static_cast<Index>(edges.size());
    const Index pixels = h * w;
    Matrix d = Matrix::Zero(channels * e, channels * pixels);
    for (Index ch = 0; ch < channels; ++ch) {
        for (Index k = 0; k < e; ++k) {
            d(ch * e + k, ch * pixels + edges[static_cast<std::size_t>(k)].first) = 1.0;
            d(ch * e + k, ch * pixels + edges[static_cast<std::size_t>(k)].second) = -1.0;
        }
    }
    return d;
}

Matrix build_complete_graph_tv(Index p) {
    if (p < 2) throw InvalidDimension("complete-graph TV needs p >= 2");
    Matrix d = Matrix::Zero(p * (p - 1) / 2, p);
    Index row = 0;
    for (Index i = 0; i < p; ++i) {
        for (Index j = i + 1; j < p; ++j, ++row) {
            d(row, i) = 1.0;
            d(row, j) = -1.0;
        }
    }
    return d;
}

Matrix scale_to_unit(const Matrix& d) {
    const double smin = smallest_nonzero_singular_value(d);
    return smin > 0.0 ? Matrix(d / smin) : d;
}

PairwiseDesign build_pairwise(const std::vector<ComparisonRecord>& records, Index p, bool d_from_x_scaled) {
    if (records.empty()) throw InvalidRecord("no comparison records");
    if (p < 2) throw InvalidDimension("pairwise design needs p >= 2");
    PairwiseDesign out;
    const Index n = static_cast<Index>(records.size());
    out.X = Matrix::Zero(n, p);
    out.y.resize(n);
    for (Index k = 0; k < n; ++k) {
        const ComparisonRecord& r = records[static_cast<std::size_t>(k)];
        if (r.i < 1 || r.i > p || r.j < 1 || r.j > p)
            throw InvalidRecord("record " + std::to_string(k + 1) + ": index outside 1.." + std::to_string(p));
        if (r.i == r.j) throw InvalidRecord("record " + std::to_string(k + 1) + ": item compared with itself");
        if (!std::isfinite(r.y)) throw InvalidRecord("record " + std::to_string(k + 1) + ": non-finite outcome");
        out.X(k, r.i - 1) = 1.0;
        out.X(k, r.j - 1) = -1.0;
        out.y(k) = r.y;
    }
    out.D = d_from_x_scaled ? scale_to_unit(out.X) : Matrix(0, p);
    return out;
}

std::vector<IndexSet> comparison_components(const std::vector<ComparisonRecord>& records, Index p) {
    std::vector<Index> parent(static_cast<std::size_t>(p));
    std::iota(parent.begin(), parent.end(), Index{0});
    auto find = [&](Index v) {
        while (parent[static_cast<std::size_t>(v)] != v) {
            parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
            v = parent[static_cast<std::size_t>(v)];
        }
        return v;
    };
    for (const ComparisonRecord& r : records) {
        if (r.i < 1 || r.i > p || r.j < 1 || r.j > p) throw InvalidRecord("comparison index outside 1..p");
        const Index a = find(r.i - 1);
        const Index b = find(r.j - 1);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
    std::vector<IndexSet> comps;
    std::vector<Index> slot(static_cast<std::size_t>(p), -1);
    for (Index v = 0; v < p; ++v) {
        const Index root = find(v);
        if (slot[static_cast<std::size_t>(root)] < 0) {
            slot[static_cast<std::size_t>(root)] = static_cast<Index>(comps.size());
            comps.emplace_back();
        }
        comps[static_cast<std::size_t>(slot[static_cast<std::size_t>(root)])].push_back(v);
    }
    return comps;
}

Grouping extract_groups(const Vector& values, double tol) {
    if (!(tol >= 0.0)) throw InvalidHyperparam("grouping tolerance must be >= 0");
    const Index p = values.size();
    std::vector<Index> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return values(a) > values(b); });

    Grouping g;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const Index v = order[k];
        if (k == 0 || values(order[k - 1]) - values(v) > tol) g.groups.emplace_back();
        g.groups.back().push_back(v);
    }
    for (IndexSet& grp : g.groups) {
        std::sort(grp.begin(), grp.end());
        double sum = 0.0;
        for (Index v : grp) sum += values(v);
        g.values.push_back(sum / static_cast<double>(grp.size()));
    }
    // Lower group -> higher group.
    for (std::size_t hi = 0; hi < g.groups.size(); ++hi)
        for (std::size_t lo = hi + 1; lo < g.groups.size(); ++lo)
            for (Index i : g.groups[lo])
                for (Index j : g.groups[hi]) g.edges.emplace_back(i, j);
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

std::vector<ComparisonRecord> parse_comparisons(std::istream& in) {
    std::vector<ComparisonRecord> records;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (!header_seen) {
            std::string compact;
            for (char c : line)
                if (c != ' ' && c != '\t') compact.push_back(c);
            if (compact != "i,j,y") throw ParseError("expected header 'i,j,y'", line_no);
            header_seen = true;
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 3) throw ParseError("expected 3 fields, got " + std::to_string(fields.size()), line_no);

        auto parse_index = [&](const std::string& s) {
            char* end = nullptr;
            errno = 0;
            const long long v = std::strtoll(s.c_str(), &end, 10);
            while (end && (*end == ' ' || *end == '\t')) ++end;
            if (errno || end == s.c_str() || *end != '\0') throw ParseError("bad item index '" + s + "'", line_no);
            return static_cast<Index>(v);
        };
        ComparisonRecord r;
        r.i = parse_index(fields[0]);
        r.j = parse_index(fields[1]);
        char* end = nullptr;
        errno = 0;
        r.y = std::strtod(fields[2].c_str(), &end);
        while (end && (*end == ' ' || *end == '\t')) ++end;
        if (errno || end == fields[2].c_str() || *end != '\0' || !std::isfinite(r.y))
            throw ParseError("bad outcome '" + fields[2] + "'", line_no);
        if (r.i < 1 || r.j < 1) throw ParseError("item indices are 1-based", line_no);
        if (r.i == r.j) throw ParseError("item compared with itself", line_no);
        records.push_back(r);
    }
    if (!header_seen) throw ParseError("missing header 'i,j,y'", line_no);
    return records;
}

std::vector<ComparisonRecord> ingest_comparisons_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return parse_comparisons(in);
}

void export_comparisons_csv(const std::string& path, const std::vector<ComparisonRecord>& records) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "i,j,y\n";
    char buf[64];
    for (const ComparisonRecord& r : records) {
        std::snprintf(buf, sizeof buf, "%.17g", r.y);
        out << r.i << ',' << r.j << ',' << buf << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace slbi
