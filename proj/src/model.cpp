#include "model.hpp"

#include <cmath>
#include <filesystem>

#include "csv.hpp"

namespace satcs {

void GroundTruth::validate() const {
  if (sparsity_k < 1 || sparsity_k > x_bar.size())
    throw std::invalid_argument("ground truth: sparsity outside [1, n]");
  if (static_cast<int>(support.size()) != sparsity_k)
    throw std::invalid_argument("ground truth: support size != sparsity");
  std::vector<char> on(static_cast<size_t>(x_bar.size()), 0);
  int prev = -1;
  for (int idx : support) {
    if (idx <= prev || idx >= x_bar.size())
      throw std::invalid_argument("ground truth: support not sorted in range");
    prev = idx;
    on[static_cast<size_t>(idx)] = 1;
  }
  for (Eigen::Index i = 0; i < x_bar.size(); ++i) {
    if (!on[static_cast<size_t>(i)] && x_bar[i] != 0.0)
      throw std::invalid_argument("ground truth: nonzero off support");
  }
  if (std::abs(x_bar.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("ground truth: signal not unit norm");
}

void SaturatedDataset::validate() const {
  if (!std::isfinite(y_min) || !std::isfinite(y_max) || !(y_min < y_max))
    throw std::invalid_argument("dataset: need finite y_min < y_max");
  if (m2() > 0 && phi2.cols() != phi1.cols())
    throw DimensionError("dataset: phi1/phi2 column mismatch");
  if (y1.size() != m1() || y2.size() != m2() || s2.size() != m2())
    throw DimensionError("dataset: row count mismatch");
  if (static_cast<Eigen::Index>(idx1.size()) != m1() ||
      static_cast<Eigen::Index>(idx2.size()) != m2())
    throw DimensionError("dataset: provenance index size mismatch");
  if (m() == 0) throw std::invalid_argument("dataset: no measurements");
  if (!phi1.allFinite() || !phi2.allFinite())
    throw std::invalid_argument("dataset: non-finite sensing entries");
  for (Eigen::Index i = 0; i < m1(); ++i) {
    if (!(y1[i] > y_min && y1[i] < y_max))
      throw std::invalid_argument("dataset: y1 entry not strictly inside (y_min, y_max)");
  }
  for (Eigen::Index i = 0; i < m2(); ++i) {
    if (s2[i] == 1) {
      if (y2[i] != y_max) throw std::invalid_argument("dataset: s2=+1 entry must equal y_max");
    } else if (s2[i] == -1) {
      if (y2[i] != y_min) throw std::invalid_argument("dataset: s2=-1 entry must equal y_min");
    } else {
      throw std::invalid_argument("dataset: s2 entries must be +1 or -1");
    }
  }
}

Eigen::VectorXd clip(const Eigen::VectorXd& y_raw, double y_min, double y_max) {
  if (!(y_min < y_max)) throw std::invalid_argument("clip: need y_min < y_max");
  return y_raw.cwiseMax(y_min).cwiseMin(y_max);
}

SaturatedDataset partition_measurements(const Eigen::MatrixXd& phi,
                                        const Eigen::VectorXd& y_clipped,
                                        double y_min, double y_max) {
  if (phi.rows() != y_clipped.size())
    throw DimensionError("partition: phi rows != measurement count");
  if (!(y_min < y_max)) throw std::invalid_argument("partition: need y_min < y_max");
  const Eigen::Index m = phi.rows();
  const Eigen::Index n = phi.cols();

  std::vector<int> idx1, idx2;
  std::vector<int> sign;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double v = y_clipped[i];
    if (v > y_max || v < y_min || !std::isfinite(v))
      throw std::invalid_argument("partition: measurement outside [y_min, y_max]");
    if (v == y_max) {
      idx2.push_back(static_cast<int>(i));
      sign.push_back(+1);
    } else if (v == y_min) {
      idx2.push_back(static_cast<int>(i));
      sign.push_back(-1);
    } else {
      idx1.push_back(static_cast<int>(i));
    }
  }

  SaturatedDataset ds;
  ds.y_min = y_min;
  ds.y_max = y_max;
  ds.phi1.resize(static_cast<Eigen::Index>(idx1.size()), n);
  ds.y1.resize(static_cast<Eigen::Index>(idx1.size()));
  ds.phi2.resize(static_cast<Eigen::Index>(idx2.size()), n);
  ds.y2.resize(static_cast<Eigen::Index>(idx2.size()));
  ds.s2.resize(static_cast<Eigen::Index>(idx2.size()));
  for (size_t r = 0; r < idx1.size(); ++r) {
    ds.phi1.row(static_cast<Eigen::Index>(r)) = phi.row(idx1[r]);
    ds.y1[static_cast<Eigen::Index>(r)] = y_clipped[idx1[r]];
  }
  for (size_t r = 0; r < idx2.size(); ++r) {
    ds.phi2.row(static_cast<Eigen::Index>(r)) = phi.row(idx2[r]);
    ds.y2[static_cast<Eigen::Index>(r)] = y_clipped[idx2[r]];
    ds.s2[static_cast<Eigen::Index>(r)] = sign[r];
  }
  ds.idx1 = std::move(idx1);
  ds.idx2 = std::move(idx2);
  ds.validate();
  return ds;
}

Eigen::VectorXd reconstruct_clipped(const SaturatedDataset& ds) {
  Eigen::VectorXd y(ds.m());
  for (Eigen::Index r = 0; r < ds.m1(); ++r) y[ds.idx1[static_cast<size_t>(r)]] = ds.y1[r];
  for (Eigen::Index r = 0; r < ds.m2(); ++r) y[ds.idx2[static_cast<size_t>(r)]] = ds.y2[r];
  return y;
}

void save_dataset(const SaturatedDataset& ds, const std::string& dir) {
  ds.validate();
  std::filesystem::create_directories(dir);
  csv::write_matrix(dir + "/phi1.csv", ds.phi1);
  csv::write_vector(dir + "/y1.csv", ds.y1);
  csv::write_matrix(dir + "/phi2.csv", ds.phi2);
  csv::write_vector(dir + "/y2.csv", ds.y2);
  csv::write_int_vector(dir + "/s2.csv", ds.s2);
  csv::write_kv(dir + "/meta.csv",
                {{"y_min", csv::format_double(ds.y_min)},
                 {"y_max", csv::format_double(ds.y_max)},
                 {"n", std::to_string(ds.n())}});
}

SaturatedDataset load_dataset(const std::string& dir) {
  auto meta = csv::read_kv(dir + "/meta.csv");
  for (const char* key : {"y_min", "y_max", "n"}) {
    if (!meta.count(key)) throw IoError(dir + "/meta.csv: missing key " + std::string(key));
  }
  const auto n = static_cast<Eigen::Index>(csv::parse_int(meta["n"], dir + "/meta.csv"));
  SaturatedDataset ds;
  ds.y_min = csv::parse_double(meta["y_min"], dir + "/meta.csv");
  ds.y_max = csv::parse_double(meta["y_max"], dir + "/meta.csv");
  ds.phi1 = csv::read_matrix(dir + "/phi1.csv", n);
  ds.y1 = csv::read_vector(dir + "/y1.csv");
  ds.phi2 = csv::read_matrix(dir + "/phi2.csv", n);
  ds.y2 = csv::read_vector(dir + "/y2.csv");
  ds.s2 = csv::read_int_vector(dir + "/s2.csv");
  ds.idx1.resize(static_cast<size_t>(ds.phi1.rows()));
  ds.idx2.resize(static_cast<size_t>(ds.phi2.rows()));
  for (size_t r = 0; r < ds.idx1.size(); ++r) ds.idx1[r] = static_cast<int>(r);
  for (size_t r = 0; r < ds.idx2.size(); ++r)
    ds.idx2[r] = static_cast<int>(ds.idx1.size() + r);
  ds.validate();
  return ds;
}

void save_ground_truth(const GroundTruth& gt, const std::string& path) {
  gt.validate();
  csv::write_vector(path, gt.x_bar);
}

GroundTruth load_ground_truth(const std::string& path) {
  GroundTruth gt;
  gt.x_bar = csv::read_vector(path);
  for (Eigen::Index i = 0; i < gt.x_bar.size(); ++i) {
    if (gt.x_bar[i] != 0.0) gt.support.push_back(static_cast<int>(i));
  }
  gt.sparsity_k = static_cast<int>(gt.support.size());
  gt.validate();
  return gt;
}

}  // namespace satcs
