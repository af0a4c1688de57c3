#include "decolemma/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "decolemma/errors.hpp"

namespace decolemma::io {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool skip_line(std::string_view s) { return s.empty() || s.front() == '#'; }

std::vector<double> parse_fields(std::string_view line, const std::string& source, std::size_t line_no) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        const auto field = trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (field.empty()) throw InputError(source, line_no, "empty field");
        double v = 0.0;
        const char* first = field.data();
        const char* last = field.data() + field.size();
        if (*first == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last)
            throw InputError(source, line_no, "cannot parse number '" + std::string(field) + "'");
        if (!std::isfinite(v)) throw InputError(source, line_no, "non-finite number");
        out.push_back(v);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

template <class F>
void for_each_data_line(std::istream& in, F&& f) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (skip_line(t)) continue;
        f(t, line_no);
    }
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path.string(), 0, "cannot open file");
    return in;
}

}  // namespace

std::vector<Complex> read_value_column(std::istream& in, const std::string& source) {
    std::vector<Complex> out;
    for_each_data_line(in, [&](std::string_view line, std::size_t no) {
        const auto f = parse_fields(line, source, no);
        if (f.size() > 2) throw InputError(source, no, "expected `re` or `re,im`");
        out.emplace_back(f[0], f.size() == 2 ? f[1] : 0.0);
    });
    return out;
}

std::vector<Complex> read_value_column(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return read_value_column(in, path.string());
}

std::vector<double> read_real_column(std::istream& in, const std::string& source) {
    std::vector<double> out;
    for_each_data_line(in, [&](std::string_view line, std::size_t no) {
        const auto f = parse_fields(line, source, no);
        if (f.size() != 1) throw InputError(source, no, "expected one real value per line");
        out.push_back(f[0]);
    });
    return out;
}

std::vector<double> read_real_column(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return read_real_column(in, path.string());
}

Eigen::MatrixXcd read_complex_matrix(std::istream& in, const std::string& source) {
    std::vector<std::vector<Complex>> rows;
    std::size_t last_line = 0;
    for_each_data_line(in, [&](std::string_view line, std::size_t no) {
        const auto f = parse_fields(line, source, no);
        if (f.size() % 2 != 0) throw InputError(source, no, "row must hold re,im pairs");
        std::vector<Complex> row;
        for (std::size_t c = 0; c < f.size(); c += 2) row.emplace_back(f[c], f[c + 1]);
        if (!rows.empty() && row.size() != rows.front().size())
            throw InputError(source, no, "row has " + std::to_string(row.size()) + " entries, expected " +
                                             std::to_string(rows.front().size()));
        rows.push_back(std::move(row));
        last_line = no;
    });
    if (rows.empty()) throw InputError(source, 0, "matrix is empty");
    if (rows.size() != rows.front().size())
        throw InputError(source, last_line, "matrix is not square");
    const auto k = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXcd m(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

Eigen::MatrixXcd read_complex_matrix(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return read_complex_matrix(in, path.string());
}

void write_complex_matrix(std::ostream& out, const Eigen::MatrixXcd& m) {
    const auto old = out.precision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << m(i, j).real() << ',' << m(i, j).imag();
        }
        out << '\n';
    }
    out.precision(old);
}

DiscreteModel load_model(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    const std::string source = path.string();
    const auto base = path.parent_path();
    double hbar = 1.0;
    std::filesystem::path energies, rho, obs;
    for_each_data_line(in, [&](std::string_view line, std::size_t no) {
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) throw InputError(source, no, "expected `key: value`");
        const auto key = trim(line.substr(0, colon));
        const auto value = std::string(trim(line.substr(colon + 1)));
        if (value.empty()) throw InputError(source, no, "missing value for '" + std::string(key) + "'");
        auto resolve = [&](const std::string& v) {
            std::filesystem::path p(v);
            return p.is_absolute() ? p : base / p;
        };
        if (key == "hbar") {
            const auto f = parse_fields(value, source, no);
            if (f.size() != 1 || !(f[0] > 0.0)) throw InputError(source, no, "hbar must be one positive number");
            hbar = f[0];
        } else if (key == "energies") {
            energies = resolve(value);
        } else if (key == "rho") {
            rho = resolve(value);
        } else if (key == "observable") {
            obs = resolve(value);
        } else {
            throw InputError(source, no, "unknown key '" + std::string(key) + "'");
        }
    });
    if (energies.empty() || rho.empty() || obs.empty())
        throw InputError(source, 0, "model file needs energies, rho and observable entries");
    return DiscreteModel(read_real_column(energies), read_complex_matrix(rho), read_complex_matrix(obs), hbar);
}

void save_model(const DiscreteModel& model, const std::filesystem::path& path) {
    const auto stem = path.stem().string();
    const auto dir = path.parent_path();
    const std::string e_name = stem + "_energies.csv", r_name = stem + "_rho.csv", o_name = stem + "_observable.csv";
    {
        std::ofstream out(dir / e_name);
        out.precision(17);
        out << "# energies\n";
        for (double e : model.energies()) out << e << '\n';
    }
    {
        std::ofstream out(dir / r_name);
        write_complex_matrix(out, model.rho());
    }
    {
        std::ofstream out(dir / o_name);
        write_complex_matrix(out, model.observable());
    }
    std::ofstream out(path);
    out.precision(17);
    out << "# decolemma model\n"
        << "hbar: " << model.hbar() << '\n'
        << "energies: " << e_name << '\n'
        << "rho: " << r_name << '\n'
        << "observable: " << o_name << '\n';
    if (!out) throw InputError(path.string(), 0, "cannot write model file");
}

}  // namespace decolemma::io
