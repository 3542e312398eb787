#include "anisodg/matrix_market.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "anisodg/types.hpp"

namespace anisodg {

void write_matrix_market(const std::filesystem::path& path, const CsrMatrix& a)
{
    std::ofstream out(path);
    if (!out) {
        throw Error("write_matrix_market: cannot open " + path.string());
    }
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
    out.precision(17);
    for (int i = 0; i < a.rows(); ++i) {
        for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
            out << i + 1 << ' ' << a.col_index()[p] + 1 << ' ' << a.values()[p] << '\n';
        }
    }
    if (!out) {
        throw Error("write_matrix_market: write failed for " + path.string());
    }
}

CsrMatrix read_matrix_market(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("read_matrix_market: cannot open " + path.string());
    }
    std::string line;
    std::getline(in, line);
    if (line.rfind("%%MatrixMarket matrix coordinate real", 0) != 0) {
        throw Error("read_matrix_market: unsupported header in " + path.string());
    }
    const bool symmetric = line.find("symmetric") != std::string::npos;
    while (std::getline(in, line) && !line.empty() && line[0] == '%') {
    }
    std::istringstream dims(line);
    int rows = 0, cols = 0;
    long nnz = 0;
    if (!(dims >> rows >> cols >> nnz)) {
        throw Error("read_matrix_market: bad size line in " + path.string());
    }
    std::vector<Triplet> t;
    t.reserve(symmetric ? 2 * nnz : nnz);
    for (long k = 0; k < nnz; ++k) {
        int i = 0, j = 0;
        double v = 0.0;
        if (!(in >> i >> j >> v)) {
            throw Error("read_matrix_market: truncated entries in " + path.string());
        }
        t.push_back({i - 1, j - 1, v});
        if (symmetric && i != j) {
            t.push_back({j - 1, i - 1, v});
        }
    }
    return CsrMatrix::from_triplets(rows, cols, std::move(t));
}

void write_vector(const std::filesystem::path& path, std::span<const double> v)
{
    std::ofstream out(path);
    if (!out) {
        throw Error("write_vector: cannot open " + path.string());
    }
    out.precision(17);
    for (double x : v) {
        out << x << '\n';
    }
}

std::vector<double> read_vector(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("read_vector: cannot open " + path.string());
    }
    std::vector<double> v;
    double x = 0.0;
    while (in >> x) {
        v.push_back(x);
    }
    return v;
}

} // namespace anisodg
