#pragma once

#include "slbi/numkernel.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace slbi {

/// (2p-1) x p: first differences beta_j - beta_{j+1}, then I_p.
Matrix build_fused_1d(Index p);

/// Incidence operator of the 4-neighbour h x w grid, replicated block-diagonally
/// over channels. Pixel (r, c) of channel ch is coordinate ch*h*w + r*w + c.
/// Edges are enumerated row-major, right edge before down edge at each pixel.
Matrix build_grid_gradient(Index h, Index w, Index channels);

/// p(p-1)/2 rows e_i - e_j, i < j in lexicographic order.
Matrix build_complete_graph_tv(Index p);

/// Rescales D so its smallest nonzero singular value is 1 (zero D unchanged).
Matrix scale_to_unit(const Matrix& d);

/// One pairwise comparison, 1-based item indices.
struct ComparisonRecord {
    Index i = 0;
    Index j = 0;
    double y = 0.0;

    bool operator==(const ComparisonRecord&) const = default;
};

struct PairwiseDesign {
    Matrix X;
    Vector y;
    Matrix D;  // empty (0 x p) unless requested
};

/// Row k of X has +1 at i_k and -1 at j_k. With d_from_x_scaled, D = X / lambda_min,+(X).
PairwiseDesign build_pairwise(const std::vector<ComparisonRecord>& records, Index p, bool d_from_x_scaled);

/// Connected components of the comparison graph on items 1..p (returned 0-based,
/// each sorted, ordered by smallest member).
std::vector<IndexSet> comparison_components(const std::vector<ComparisonRecord>& records, Index p);

struct Grouping {
    std::vector<IndexSet> groups;  // descending value, members 0-based and sorted
    std::vector<double> values;    // mean value per group
    /// Directed edges between coordinates of different groups: (i, j) with
    /// value_i < value_j.
    std::vector<std::pair<Index, Index>> edges;
};

/// Single-linkage merge of sorted values with gaps <= tol.
Grouping extract_groups(const Vector& values, double tol = 1e-9);

/// Reads `i,j,y` records after a header line. Blank lines are skipped.
std::vector<ComparisonRecord> ingest_comparisons_csv(const std::string& path);
std::vector<ComparisonRecord> parse_comparisons(std::istream& in);

/// Writes the header and one line per record with round-trip precision.
void export_comparisons_csv(const std::string& path, const std::vector<ComparisonRecord>& records);

}  // namespace slbi
