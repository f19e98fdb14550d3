#include "graphtension/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include <spdlog/spdlog.h>

#include "graphtension/error.hpp"

namespace graphtension {

double nmi(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) throw InputError("nmi: partitions have different lengths");
  const auto n = static_cast<double>(a.size());
  if (a.size() == 0) return 1.0;
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> pa, pb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1.0;
    pa[a[i]] += 1.0;
    pb[b[i]] += 1.0;
  }
  auto entropy = [n](const std::map<int, double>& m) {
    double h = 0.0;
    for (const auto& [_, c] : m) h -= c / n * std::log(c / n);
    return h;
  };
  const double ha = entropy(pa), hb = entropy(pb);
  if (ha + hb == 0.0) return 1.0;
  double mi = 0.0;
  for (const auto& [key, c] : joint) mi += c / n * std::log(c * n / (pa[key.first] * pb[key.second]));
  return std::clamp(2.0 * mi / (ha + hb), 0.0, 1.0);
}

FeatureMatrix load_features(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (true) {
      const std::size_t end = std::min(line.find(',', pos), line.size());
      std::size_t b = pos, e = end;
      while (b < e && (line[b] == ' ' || line[b] == '\t')) ++b;
      while (e > b && (line[e - 1] == ' ' || line[e - 1] == '\t')) --e;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(line.data() + b, line.data() + e, v);
      if (b == e || ec != std::errc() || ptr != line.data() + e)
        throw ParseError(line_no, "expected a decimal value in feature row");
      if (!std::isfinite(v)) throw InputError("feature row " + std::to_string(line_no) + " has a non-finite value");
      row.push_back(v);
      if (end == line.size()) break;
      pos = end + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(line_no, "feature rows have different lengths");
    rows.push_back(std::move(row));
  }
  FeatureMatrix f(static_cast<Eigen::Index>(rows.size()),
                  rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) f(i, j) = rows[i][j];
  return f;
}

void write_features(std::ostream& out, const FeatureMatrix& f) {
  char buf[64];
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    for (Eigen::Index j = 0; j < f.cols(); ++j) {
      if (j) out << ',';
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, f(i, j));
      out.write(buf, ptr - buf);
    }
    out << '\n';
  }
}

Image image_from_rows(const FeatureMatrix& rows, int height, int width) {
  if (height < 1 || width < 1 || rows.rows() != static_cast<Eigen::Index>(height) * width)
    throw InputError("image: row count must equal height * width");
  Image img{height, width, static_cast<int>(rows.cols()), {}};
  img.data.reserve(static_cast<std::size_t>(rows.size()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i)
    for (Eigen::Index c = 0; c < rows.cols(); ++c) img.data.push_back(rows(i, c));
  return img;
}

FeatureMatrix nonlocal_features(const Image& img, int r, std::array<double, 3> weights) {
  if (img.height < 3 || img.width < 3) throw InputError("nonlocal_features: image must be at least 3 x 3");
  if (r < 0) throw ConfigError("nonlocal_features: window radius must be >= 0");
  const int side = 2 * r + 1;
  const int c_n = img.channels;
  FeatureMatrix f(static_cast<Eigen::Index>(img.height) * img.width, static_cast<Eigen::Index>(side) * side * c_n);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      const Eigen::Index row = static_cast<Eigen::Index>(y) * img.width + x;
      Eigen::Index col = 0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          const double w = weights[std::min(2, std::abs(dy) + std::abs(dx))];
          const int yy = std::clamp(y + dy, 0, img.height - 1);
          const int xx = std::clamp(x + dx, 0, img.width - 1);
          for (int c = 0; c < c_n; ++c) f(row, col++) = w * img.at(yy, xx, c);
        }
    }
  return f;
}

Graph knn_graph(const FeatureMatrix& f, int k) {
  const Eigen::Index n = f.rows();
  if (k < 1 || k >= n) throw InputError("knn_graph: need 1 <= k < number of items");
  FeatureMatrix unit = f;
  std::size_t zero_rows = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = unit.row(i).norm();
    if (norm > 0.0) {
      unit.row(i) /= norm;
    } else {
      unit.row(i).setZero();
      ++zero_rows;
    }
  }
  if (zero_rows > 0) spdlog::warn("knn_graph: {} zero-norm feature rows get similarity 0", zero_rows);

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * k);
  const Eigen::Index block = 256;
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  for (Eigen::Index start = 0; start < n; start += block) {
    const Eigen::Index rows = std::min(block, n - start);
    const Eigen::MatrixXd sim = unit.middleRows(start, rows) * unit.transpose();
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Eigen::Index i = start + r;
      idx.clear();
      for (Eigen::Index j = 0; j < n; ++j)
        if (j != i) idx.push_back(j);
      auto better = [&](Eigen::Index a, Eigen::Index b) {
        return sim(r, a) > sim(r, b) || (sim(r, a) == sim(r, b) && a < b);
      };
      std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), better);
      for (int t = 0; t < k; ++t) edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(idx[t])});
    }
  }
  return Graph::from_edges(static_cast<NodeId>(n), edges);
}

}  // namespace graphtension
