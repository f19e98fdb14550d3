#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "graphtension/graph.hpp"

namespace graphtension {

/// Normalized mutual information 2 I(a; b) / (H(a) + H(b)), taken as 1 when
/// both partitions are single communities. Throws InputError on length mismatch.
double nmi(const Partition& a, const Partition& b);

/// One item per row.
using FeatureMatrix = Eigen::MatrixXd;

/// Comma-separated decimals, one item per line. Blank lines and lines starting
/// with '#' are skipped. Throws ParseError on malformed or ragged rows and
/// InputError on non-finite values.
FeatureMatrix load_features(std::istream& in);
void write_features(std::ostream& out, const FeatureMatrix& f);

/// Row-major H x W x C image.
struct Image {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<double> data;

  double at(int y, int x, int c) const { return data[(static_cast<std::size_t>(y) * width + x) * channels + c]; }
};

/// Builds an Image from a feature matrix whose rows are pixels in row-major order.
Image image_from_rows(const FeatureMatrix& rows, int height, int width);

/// Per pixel, the channel vectors of the (2r+1) x (2r+1) window concatenated in
/// row-major window order, scaled by weights[d] where d is the Manhattan
/// distance class (0 center, 1 edge-adjacent, 2 and beyond corner). Out-of-range
/// pixels replicate the nearest edge pixel.
FeatureMatrix nonlocal_features(const Image& img, int window_radius = 1,
                                std::array<double, 3> weights = {1.0, 0.5, 0.25});

/// Unweighted k-nearest-neighbor graph under cosine similarity, union
/// symmetrized. Ties go to the lower index; zero-norm rows have similarity 0 to
/// every item. Throws InputError unless 1 <= k < number of items.
Graph knn_graph(const FeatureMatrix& f, int k = 10);

}  // namespace graphtension
