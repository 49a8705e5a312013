#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <filesystem>
#include <limits>
#include <sstream>

#include "oracles.hpp"
#include "structnorm/structnorm.hpp"

using namespace structnorm;

namespace {

bool same_bits(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

ComplexMatrix round_trip(const ComplexMatrix& a) {
    std::stringstream ss;
    write_matrix(ss, a);
    return read_matrix(ss);
}

ComplexMatrix parse(const std::string& text) {
    std::istringstream in(text);
    return read_matrix(in);
}

} // namespace

TEST(FormatReal, RoundTripsSpecialValues) {
    const double lim = std::numeric_limits<double>::max();
    for (double v : {0.0, -0.0, 1.0, -1.5, 0.1, 1e308, -1e308, lim, std::numeric_limits<double>::denorm_min(),
                     std::numeric_limits<double>::min(), 4.9406564584124654e-324, 1.0 / 3.0})
        EXPECT_TRUE(same_bits(parse_real(format_real(v)), v)) << format_real(v);
}

TEST(FormatReal, RandomBitPatterns) {
    std::mt19937_64 rng(9);
    int tested = 0;
    while (tested < 20000) {
        const double v = std::bit_cast<double>(rng());
        if (!std::isfinite(v))
            continue;
        ++tested;
        ASSERT_TRUE(same_bits(parse_real(format_real(v)), v)) << format_real(v);
    }
}

TEST(ParseReal, AcceptsLeadingPlusRejectsGarbage) {
    EXPECT_EQ(parse_real("+2.5"), 2.5);
    EXPECT_EQ(parse_real("-3e2"), -300.0);
    EXPECT_THROW(parse_real(""), Error);
    EXPECT_THROW(parse_real("abc"), Error);
    EXPECT_THROW(parse_real("1.0x"), Error);
    EXPECT_THROW(parse_integer("1.5"), Error);
    EXPECT_EQ(parse_integer("42"), 42);
}

TEST(MatrixIo, BitExactRoundTrip) {
    std::mt19937_64 rng(1);
    ComplexMatrix a = oracle::random_complex(6, 6, rng);
    a(0, 0) = {-0.0, 1e308};
    a(1, 2) = {std::numeric_limits<double>::denorm_min(), -1e-300};
    const ComplexMatrix b = round_trip(a);
    ASSERT_EQ(b.rows(), 6);
    ASSERT_EQ(b.cols(), 6);
    for (Index c = 0; c < 6; ++c)
        for (Index r = 0; r < 6; ++r) {
            EXPECT_TRUE(same_bits(a(r, c).real(), b(r, c).real()));
            EXPECT_TRUE(same_bits(a(r, c).imag(), b(r, c).imag()));
        }
}

TEST(MatrixIo, ColumnMajorLayout) {
    ComplexMatrix a(2, 2);
    a << std::complex<double>(1, 0), std::complex<double>(2, 0), std::complex<double>(3, 0),
        std::complex<double>(4, -1);
    std::ostringstream out;
    write_matrix(out, a);
    EXPECT_EQ(out.str(), "structnorm-matrix v1 2 2 complex\n1 0\n3 0\n2 0\n4 -1\n");
}

TEST(MatrixIo, RejectsMalformedInput) {
    EXPECT_THROW(parse(""), Error);
    EXPECT_THROW(parse("matrix v1 1 1 complex\n1 0\n"), Error);
    EXPECT_THROW(parse("structnorm-matrix v2 1 1 complex\n1 0\n"), Error);
    EXPECT_THROW(parse("structnorm-matrix v1 1 1 real\n1 0\n"), Error);
    EXPECT_THROW(parse("structnorm-matrix v1 2 1 complex\n1 0\n"), Error);
    EXPECT_THROW(parse("structnorm-matrix v1 1 1 complex\n1\n"), Error);
    EXPECT_THROW(parse("structnorm-matrix v1 1 1 complex\n1 zero\n"), Error);
    EXPECT_THROW(parse("structnorm-matrix v1 1 1 complex\n1 0\n2 0\n"), Error);
    EXPECT_THROW(parse("structnorm-matrix v1 -1 1 complex\n"), Error);
    EXPECT_NO_THROW(parse("structnorm-matrix v1 1 1 complex\n1 0\n\n"));
}

TEST(MatrixIo, FileRoundTripAndMissingFile) {
    const auto dir = std::filesystem::temp_directory_path() / "structnorm_test_io";
    std::filesystem::create_directories(dir);
    const ComplexMatrix a = gen_structured(Structure::perskew_hermitian, HalfDimension(3), 5);
    write_matrix_file(dir / "a.txt", a);
    EXPECT_EQ(read_matrix_file(dir / "a.txt"), a);
    EXPECT_THROW(read_matrix_file(dir / "missing.txt"), Error);
    std::filesystem::remove_all(dir);
}

TEST(TraceIo, RoundTrip) {
    const ComplexMatrix a = gen_structured(Structure::skew_hamiltonian, HalfDimension(3), 2);
    SolverConfig cfg;
    cfg.max_sweeps = 2;
    const auto res = structnorm::solve(a, Structure::skew_hamiltonian, cfg);
    std::stringstream ss;
    write_trace(ss, res.trace);
    const auto back = read_trace(ss);
    ASSERT_EQ(back.size(), res.trace.size());
    for (std::size_t k = 0; k < back.size(); ++k) {
        EXPECT_EQ(back[k].sweep, res.trace[k].sweep);
        EXPECT_EQ(back[k].step, res.trace[k].step);
        EXPECT_EQ(back[k].kind, res.trace[k].kind);
        EXPECT_EQ(back[k].i, res.trace[k].i);
        EXPECT_EQ(back[k].j, res.trace[k].j);
        EXPECT_TRUE(same_bits(back[k].phi, res.trace[k].phi));
        EXPECT_TRUE(same_bits(back[k].alpha, res.trace[k].alpha));
        EXPECT_TRUE(same_bits(back[k].diag_norm_sq, res.trace[k].diag_norm_sq));
        EXPECT_TRUE(same_bits(back[k].offdiag_norm_sq, res.trace[k].offdiag_norm_sq));
        EXPECT_EQ(back[k].skipped, res.trace[k].skipped);
    }
}

TEST(TraceIo, RejectsBadHeaderAndRows) {
    std::istringstream bad_head("sweep,step\n");
    EXPECT_THROW(read_trace(bad_head), Error);
    std::istringstream bad_row(std::string(trace_header) + "\n1,2,3\n");
    EXPECT_THROW(read_trace(bad_row), Error);
    std::istringstream bad_kind(std::string(trace_header) + "\n1,1,nope,1,2,0,0,1,1,0\n");
    EXPECT_THROW(read_trace(bad_kind), Error);
}

TEST(AbsGrid, WritesModuli) {
    ComplexMatrix a(2, 2);
    a << std::complex<double>(3, 4), 0, std::complex<double>(0, -2), 1;
    std::ostringstream out;
    write_abs_grid(out, a);
    EXPECT_EQ(out.str(), "5,0\n2,1\n");
}
