#include "support.hpp"

#include <fstream>
#include <sstream>

namespace csoigo::testing {

TempDir::TempDir(const std::string& tag) {
  static std::uint64_t counter = 0;
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("csoigo_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Eigen::MatrixXd random_real(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen) {
  std::normal_distribution<double> n01;
  return Eigen::MatrixXd::NullaryExpr(rows, cols, [&] { return n01(gen); });
}

Eigen::MatrixXcd random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen) {
  std::normal_distribution<double> n01;
  return Eigen::MatrixXcd::NullaryExpr(rows, cols, [&] { return std::complex<double>(n01(gen), n01(gen)); });
}

}  // namespace csoigo::testing
