#include "rgsl/graph_io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "rgsl/errors.hpp"

namespace rgsl {

namespace fs = std::filesystem;

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);  // no newline translation
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

double parse_double(const std::string& field, const fs::path& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw IoError("bad number '" + field + "' in " + path.string());
  }
}

long parse_int(const std::string& field, const fs::path& path) {
  long v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    throw IoError("bad integer '" + field + "' in " + path.string());
  return v;
}

std::string read_trimmed_line(std::ifstream& in) {
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

Graph load_graph_dir(const std::string& dir) {
  const fs::path root(dir);
  Graph g;
  {
    const fs::path path = root / "meta.tsv";
    auto in = open_input(path);
    const auto fields = split_tabs(read_trimmed_line(in));
    if (fields.size() != 3) throw IoError("meta.tsv must hold n, d, C");
    g.n = static_cast<int>(parse_int(fields[0], path));
    g.d = static_cast<int>(parse_int(fields[1], path));
    g.num_classes = static_cast<int>(parse_int(fields[2], path));
  }
  if (g.n <= 0 || g.d <= 0 || g.num_classes <= 0)
    throw ValidationError("meta.tsv: all counts must be positive");

  {
    const fs::path path = root / "features.tsv";
    auto in = open_input(path);
    g.features.resize(g.n, g.d);
    for (int i = 0; i < g.n; ++i) {
      const auto fields = split_tabs(read_trimmed_line(in));
      if (static_cast<int>(fields.size()) != g.d)
        throw IoError("features.tsv row " + std::to_string(i) + " has wrong arity");
      for (int f = 0; f < g.d; ++f) g.features(i, f) = parse_double(fields[f], path);
    }
  }

  {
    const fs::path path = root / "edges.tsv";
    auto in = open_input(path);
    g.adjacency = Eigen::MatrixXd::Zero(g.n, g.n);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto fields = split_tabs(line);
      if (fields.size() != 2) throw IoError("edges.tsv line must hold two indices");
      const long i = parse_int(fields[0], path);
      const long j = parse_int(fields[1], path);
      if (i < 0 || j < 0 || i >= g.n || j >= g.n)
        throw ValidationError("edges.tsv: node index out of range");
      if (i >= j) throw ValidationError("edges.tsv: edges must satisfy i < j");
      g.adjacency(i, j) = 1.0;
      g.adjacency(j, i) = 1.0;
    }
  }

  {
    const fs::path path = root / "labels.tsv";
    auto in = open_input(path);
    g.labels.resize(g.n);
    for (int i = 0; i < g.n; ++i)
      g.labels[i] = static_cast<int>(parse_int(read_trimmed_line(in), path));
  }

  {
    const fs::path path = root / "split.tsv";
    auto in = open_input(path);
    g.train_mask = BoolVec::Constant(g.n, false);
    g.test_mask = BoolVec::Constant(g.n, false);
    for (int i = 0; i < g.n; ++i) {
      const std::string tag = read_trimmed_line(in);
      if (tag == "train")
        g.train_mask[i] = true;
      else if (tag == "test")
        g.test_mask[i] = true;
      else if (tag != "none")
        throw IoError("split.tsv: unknown tag '" + tag + "'");
    }
  }

  validate_graph(g);
  return g;
}

void save_graph_dir(const Graph& g, const std::string& dir) {
  validate_graph(g);
  const fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError("cannot create directory " + root.string());

  {
    auto out = open_output(root / "meta.tsv");
    out << g.n << '\t' << g.d << '\t' << g.num_classes << '\n';
  }
  {
    auto out = open_output(root / "features.tsv");
    for (int i = 0; i < g.n; ++i) {
      for (int f = 0; f < g.d; ++f) {
        if (f) out << '\t';
        out << format_double(g.features(i, f));
      }
      out << '\n';
    }
  }
  {
    auto out = open_output(root / "edges.tsv");
    for (int i = 0; i < g.n; ++i)
      for (int j = i + 1; j < g.n; ++j)
        if (g.adjacency(i, j) != 0.0) out << i << '\t' << j << '\n';
  }
  {
    auto out = open_output(root / "labels.tsv");
    for (int i = 0; i < g.n; ++i) out << g.labels[i] << '\n';
  }
  {
    auto out = open_output(root / "split.tsv");
    for (int i = 0; i < g.n; ++i)
      out << (g.train_mask[i] ? "train" : (g.test_mask[i] ? "test" : "none")) << '\n';
  }
}

Eigen::MatrixXd load_dense_tsv(const std::string& path) {
  auto in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_double(f, path));
    if (!rows.empty() && row.size() != rows.front().size())
      throw IoError("ragged rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("empty matrix file " + path);
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.front().size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

void save_dense_tsv(const Eigen::MatrixXd& m, const std::string& path) {
  auto out = open_output(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << '\t';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

}  // namespace rgsl
