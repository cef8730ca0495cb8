#include "drabc/io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace drabc {

namespace {

std::vector<std::vector<double>> read_numeric_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::vector<double> row;
        double v;
        while (ss >> v) row.push_back(v);
        if (!ss.eof()) throw std::runtime_error(path + ": non-numeric token in row " +
                                                std::to_string(rows.size() + 1));
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path + ": no data rows");
    for (const auto& r : rows)
        if (r.size() != rows.front().size())
            throw std::runtime_error(path + ": rows have inconsistent column counts");
    return rows;
}

}  // namespace

void save_split_bag(const SplitBag& bag, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "# columns: z[" << bag.dim_z() << "] x[" << bag.dim_x() << "]\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (int i = 0; i < bag.size(); ++i) {
        for (int j = 0; j < bag.dim_z(); ++j) out << bag.z(i, j) << (j + 1 < bag.dim_z() ? " " : "");
        for (int j = 0; j < bag.dim_x(); ++j) out << ' ' << bag.x(i, j);
        out << '\n';
    }
    if (!out.good()) throw std::runtime_error("write failed for " + path);
}

SplitBag load_split_bag(const std::string& path, int dim_z, int dim_x) {
    if (dim_z < 1 || dim_x < 1)
        throw std::invalid_argument("load_split_bag: dimensions must be positive");
    const auto rows = read_numeric_rows(path);
    if (static_cast<int>(rows.front().size()) != dim_z + dim_x)
        throw std::runtime_error(path + ": expected " + std::to_string(dim_z + dim_x) +
                                 " columns, found " + std::to_string(rows.front().size()));
    const int n = static_cast<int>(rows.size());
    Eigen::MatrixXd z(n, dim_z), x(n, dim_x);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < dim_z; ++j) z(i, j) = rows[i][j];
        for (int j = 0; j < dim_x; ++j) x(i, j) = rows[i][dim_z + j];
    }
    return SplitBag(std::move(z), std::move(x));
}

void save_posterior(const WeightedPosterior& posterior, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "# columns: weight theta[" << posterior.thetas.cols() << "]\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (Eigen::Index i = 0; i < posterior.thetas.rows(); ++i) {
        out << posterior.weights(i);
        for (Eigen::Index j = 0; j < posterior.thetas.cols(); ++j)
            out << '\t' << posterior.thetas(i, j);
        out << '\n';
    }
    if (!out.good()) throw std::runtime_error("write failed for " + path);
}

WeightedPosterior load_posterior(const std::string& path) {
    const auto rows = read_numeric_rows(path);
    const int m = static_cast<int>(rows.size());
    const int d = static_cast<int>(rows.front().size()) - 1;
    if (d < 1) throw std::runtime_error(path + ": posterior rows need weight plus theta columns");
    WeightedPosterior posterior;
    posterior.weights.resize(m);
    posterior.thetas.resize(m, d);
    for (int i = 0; i < m; ++i) {
        posterior.weights(i) = rows[i][0];
        for (int j = 0; j < d; ++j) posterior.thetas(i, j) = rows[i][j + 1];
    }
    return posterior;
}

}  // namespace drabc
