#pragma once

#include <Eigen/Dense>
#include <string>

#include "rgsl/graph.hpp"

namespace rgsl {

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double value);

/// Graph directory format (UTF-8, tab-separated):
///   meta.tsv     one line: n <TAB> d <TAB> C
///   features.tsv n lines of d reals
///   edges.tsv    one "i <TAB> j" line per undirected edge, 0-indexed, i < j
///   labels.tsv   n lines of one integer
///   split.tsv    n lines of `train`, `test`, or `none`
Graph load_graph_dir(const std::string& dir);
void save_graph_dir(const Graph& g, const std::string& dir);

/// Dense real matrix as TSV, one row per line.
Eigen::MatrixXd load_dense_tsv(const std::string& path);
void save_dense_tsv(const Eigen::MatrixXd& m, const std::string& path);

}  // namespace rgsl
