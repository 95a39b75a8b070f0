// SPDX-License-Identifier: Apache-2.0
#include "vfl/dataset.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "vfl/errors.hpp"

namespace vfl {

double Rng::uniform() {
    // top 53 bits, shifted into (0, 1]; avoids the zero Box-Muller rejects
    const std::uint64_t bits = engine_();
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

namespace {

void add_noise(Matrix& X, double noise, Rng& rng) {
    if (noise == 0.0) return;
    for (Index i = 0; i < X.rows(); ++i) {
        for (Index j = 0; j < X.cols(); ++j) {
            X(i, j) += noise * rng.gaussian();
        }
    }
}

void check_even(int n, const char* who) {
    if (n < 2 || n % 2 != 0) {
        throw InvalidInputError(std::string(who) + ": n must be a positive even number, got " +
                                std::to_string(n));
    }
}

}  // namespace

Dataset make_circles(int n, double noise, double factor, std::uint64_t seed) {
    check_even(n, "make_circles");
    if (noise < 0.0) throw InvalidInputError("make_circles: noise must be >= 0");
    if (!(factor > 0.0 && factor < 1.0)) {
        throw InvalidInputError("make_circles: factor must be in (0,1)");
    }
    const int m = n / 2;
    Dataset d;
    d.X.resize(n, 2);
    d.y.resize(n);
    for (int i = 0; i < m; ++i) {
        const double t = 2.0 * std::numbers::pi * i / m;
        d.X(i, 0) = std::cos(t);
        d.X(i, 1) = std::sin(t);
        d.y(i) = -1.0;
        d.X(m + i, 0) = factor * std::cos(t);
        d.X(m + i, 1) = factor * std::sin(t);
        d.y(m + i) = 1.0;
    }
    Rng rng(seed);
    add_noise(d.X, noise, rng);
    d.feature_names = {"x1", "x2"};
    return d;
}

Dataset make_moons(int n, double noise, std::uint64_t seed) {
    check_even(n, "make_moons");
    if (noise < 0.0) throw InvalidInputError("make_moons: noise must be >= 0");
    const int m = n / 2;
    Dataset d;
    d.X.resize(n, 2);
    d.y.resize(n);
    for (int i = 0; i < m; ++i) {
        const double t = m > 1 ? std::numbers::pi * i / (m - 1) : 0.0;
        d.X(i, 0) = std::cos(t);
        d.X(i, 1) = std::sin(t);
        d.y(i) = -1.0;
        d.X(m + i, 0) = 1.0 - std::cos(t);
        d.X(m + i, 1) = 0.5 - std::sin(t);
        d.y(m + i) = 1.0;
    }
    Rng rng(seed);
    add_noise(d.X, noise, rng);
    d.feature_names = {"x1", "x2"};
    return d;
}

VerticalSplit vertical_split(const Dataset& d, int alice_dims) {
    if (alice_dims < 1 || alice_dims >= d.dim()) {
        throw InvalidInputError("vertical_split: alice_dims must be in [1, D), got " +
                                std::to_string(alice_dims) + " with D = " +
                                std::to_string(d.dim()));
    }
    VerticalSplit s;
    s.alice_X = d.X.leftCols(alice_dims);
    s.bob_X = d.X.rightCols(d.dim() - alice_dims);
    s.bob_y = d.y;
    return s;
}

Dataset reassemble(const VerticalSplit& split) {
    Dataset d;
    d.X.resize(split.n(), split.dim());
    d.X << split.alice_X, split.bob_X;
    d.y = split.bob_y;
    for (Index j = 0; j < d.dim(); ++j) {
        d.feature_names.push_back("x" + std::to_string(j + 1));
    }
    return d;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

std::string strip(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::string& positive_label) {
    std::ifstream in(path);
    if (!in) throw IoError("load_csv: cannot open '" + path + "'");

    std::string line;
    // header, skipping schema/comment lines
    do {
        if (!std::getline(in, line)) throw IoError("load_csv: '" + path + "' is empty");
    } while (!line.empty() && line[0] == '#');

    const auto header = split_line(line);
    int label_idx = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (strip(header[i]) == label_column) {
            label_idx = static_cast<int>(i);
            break;
        }
    }
    if (label_idx < 0) {
        throw IoError("load_csv: label column '" + label_column + "' not found in '" +
                      path + "'");
    }

    std::vector<std::string> feature_names;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (static_cast<int>(i) != label_idx) feature_names.push_back(strip(header[i]));
    }

    std::vector<std::vector<double>> rows;
    std::vector<double> labels;
    int row_no = 1;  // header was row 1
    while (std::getline(in, line)) {
        ++row_no;
        if (strip(line).empty() || line[0] == '#') continue;
        const auto cells = split_line(line);
        if (cells.size() != header.size()) {
            throw IoError("load_csv: row " + std::to_string(row_no) + " has " +
                          std::to_string(cells.size()) + " cells, expected " +
                          std::to_string(header.size()));
        }
        std::vector<double> row;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const std::string cell = strip(cells[i]);
            if (static_cast<int>(i) == label_idx) {
                labels.push_back(cell == positive_label ? 1.0 : -1.0);
                continue;
            }
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
                row.push_back(v);
            } catch (const std::exception&) {
                throw IoError("load_csv: non-numeric cell '" + cell + "' at row " +
                              std::to_string(row_no) + ", column '" +
                              strip(header[i]) + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("load_csv: no data rows in '" + path + "'");

    Dataset d;
    d.X.resize(static_cast<Index>(rows.size()), static_cast<Index>(feature_names.size()));
    d.y.resize(static_cast<Index>(labels.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            d.X(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
        }
        d.y(static_cast<Index>(i)) = labels[i];
    }
    d.feature_names = std::move(feature_names);
    return d;
}

void save_csv(const Dataset& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("save_csv: cannot open '" + path + "' for writing");
    out << "# schema=vflsim.dataset.v1\n";
    for (Index j = 0; j < d.dim(); ++j) {
        out << (j < static_cast<Index>(d.feature_names.size())
                    ? d.feature_names[static_cast<std::size_t>(j)]
                    : "x" + std::to_string(j + 1))
            << ",";
    }
    out << "label\n";
    out.precision(17);
    for (Index i = 0; i < d.n(); ++i) {
        for (Index j = 0; j < d.dim(); ++j) out << d.X(i, j) << ",";
        out << static_cast<int>(d.y(i)) << "\n";
    }
    if (!out) throw IoError("save_csv: write to '" + path + "' failed");
}

Dataset standardize(const Dataset& d) {
    if (d.n() < 2) throw InvalidInputError("standardize: need at least 2 samples");
    Dataset out = d;
    for (Index j = 0; j < d.dim(); ++j) {
        const double mean = d.X.col(j).mean();
        const double var = (d.X.col(j).array() - mean).square().sum() /
                           static_cast<double>(d.n());
        const double sd = std::sqrt(var);
        if (sd == 0.0) {
            out.X.col(j).setZero();
        } else {
            out.X.col(j) = (d.X.col(j).array() - mean) / sd;
        }
    }
    return out;
}

}  // namespace vfl
