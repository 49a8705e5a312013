#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"
#include "jacobi.hpp"
#include "rotations.hpp"

namespace structnorm {

inline constexpr std::string_view matrix_magic = "structnorm-matrix";
inline constexpr std::string_view matrix_version = "v1";
inline constexpr std::string_view trace_header = "sweep,step,kind,i,j,phi,alpha,diag_norm_sq,offdiag_norm_sq,skipped";

/// 17 significant digits; round-trips binary64.
inline std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline double parse_real(std::string_view text) {
    double v = 0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (!text.empty() && *first == '+')
        ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last)
        throw Error("cannot parse number '" + std::string(text) + "'");
    return v;
}

inline long long parse_integer(std::string_view text) {
    long long v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw Error("cannot parse integer '" + std::string(text) + "'");
    return v;
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r'))
            ++pos;
        const std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r')
            ++pos;
        if (pos > start)
            out.push_back(line.substr(start, pos - start));
    }
    return out;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    if (!line.empty() && line.back() == '\r')
        line.remove_suffix(1);
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open '" + path.string() + "' for writing");
    return out;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path.string() + "' for reading");
    return in;
}

} // namespace detail

/// Header line, then one "<re> <im>" line per entry in column-major order.
inline void write_matrix(std::ostream& out, const ComplexMatrix& a) {
    out << matrix_magic << ' ' << matrix_version << ' ' << a.rows() << ' ' << a.cols() << " complex\n";
    for (Index c = 0; c < a.cols(); ++c)
        for (Index r = 0; r < a.rows(); ++r)
            out << format_real(a(r, c).real()) << ' ' << format_real(a(r, c).imag()) << '\n';
    if (!out)
        throw Error("write failed");
}

inline ComplexMatrix read_matrix(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw Error("empty matrix file");
    const auto head = detail::split_ws(line);
    if (head.size() != 5 || head[0] != matrix_magic || head[1] != matrix_version || head[4] != "complex")
        throw Error("bad matrix header '" + line + "'");
    const long long rows = parse_integer(head[2]);
    const long long cols = parse_integer(head[3]);
    if (rows < 0 || cols < 0)
        throw Error("negative matrix dimension");
    ComplexMatrix a(rows, cols);
    for (Index c = 0; c < cols; ++c)
        for (Index r = 0; r < rows; ++r) {
            if (!std::getline(in, line))
                throw Error("matrix file ends after " + std::to_string(c * rows + r) + " entries");
            const auto parts = detail::split_ws(line);
            if (parts.size() != 2)
                throw Error("bad matrix entry line '" + line + "'");
            a(r, c) = {parse_real(parts[0]), parse_real(parts[1])};
        }
    while (std::getline(in, line))
        if (!detail::split_ws(line).empty())
            throw Error("trailing data after matrix entries");
    return a;
}

inline void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& a) {
    auto out = detail::open_out(path);
    write_matrix(out, a);
}

inline ComplexMatrix read_matrix_file(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    return read_matrix(in);
}

inline void write_trace(std::ostream& out, const JacobiTrace<double>& trace) {
    out << trace_header << '\n';
    for (const auto& r : trace) {
        out << r.sweep << ',' << r.step << ',' << to_string(r.kind) << ',' << r.i << ',' << r.j << ','
            << format_real(r.phi) << ',' << format_real(r.alpha) << ',' << format_real(r.diag_norm_sq) << ','
            << format_real(r.offdiag_norm_sq) << ',' << (r.skipped ? 1 : 0) << '\n';
    }
    if (!out)
        throw Error("write failed");
}

inline JacobiTrace<double> read_trace(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw Error("empty trace file");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != trace_header)
        throw Error("bad trace header '" + line + "'");
    JacobiTrace<double> trace;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto f = detail::split_csv(line);
        if (f.size() != 10)
            throw Error("bad trace row '" + line + "'");
        TraceRecord<double> r;
        r.sweep = parse_integer(f[0]);
        r.step = parse_integer(f[1]);
        r.kind = parse_rotation_kind(f[2]);
        r.i = parse_integer(f[3]);
        r.j = parse_integer(f[4]);
        r.phi = parse_real(f[5]);
        r.alpha = parse_real(f[6]);
        r.diag_norm_sq = parse_real(f[7]);
        r.offdiag_norm_sq = parse_real(f[8]);
        r.skipped = parse_integer(f[9]) != 0;
        trace.push_back(r);
    }
    return trace;
}

inline void write_trace_file(const std::filesystem::path& path, const JacobiTrace<double>& trace) {
    auto out = detail::open_out(path);
    write_trace(out, trace);
}

inline JacobiTrace<double> read_trace_file(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    return read_trace(in);
}

/// |a_rs| as a comma-separated grid, one matrix row per line.
inline void write_abs_grid(std::ostream& out, const ComplexMatrix& a) {
    for (Index r = 0; r < a.rows(); ++r) {
        for (Index c = 0; c < a.cols(); ++c) {
            if (c)
                out << ',';
            out << format_real(std::abs(a(r, c)));
        }
        out << '\n';
    }
}

} // namespace structnorm
