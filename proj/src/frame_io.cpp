#include "needd/frame_io.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace needd
{

namespace
{

constexpr std::array<char, 4> kMagic{'N', 'D', 'L', 'T'};

void put_u64(std::ostream& out, std::uint64_t v)
{
    std::array<char, 8> b;
    for (int k = 0; k < 8; ++k)
        b[k] = static_cast<char>((v >> (8 * k)) & 0xff);
    out.write(b.data(), b.size());
}

void put_u32(std::ostream& out, std::uint32_t v)
{
    std::array<char, 4> b;
    for (int k = 0; k < 4; ++k)
        b[k] = static_cast<char>((v >> (8 * k)) & 0xff);
    out.write(b.data(), b.size());
}

void put_i32(std::ostream& out, std::int32_t v)
{
    put_u32(out, static_cast<std::uint32_t>(v));
}

void put_f64(std::ostream& out, double v)
{
    put_u64(out, std::bit_cast<std::uint64_t>(v));
}

void put_reals(std::ostream& out, const std::vector<double>& v)
{
    for (double x : v)
        put_f64(out, x);
}

void read_exact(std::istream& in, char* dst, std::size_t n)
{
    in.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n)
        throw std::runtime_error("frame file truncated");
}

std::uint64_t get_u64(std::istream& in)
{
    std::array<unsigned char, 8> b;
    read_exact(in, reinterpret_cast<char*>(b.data()), b.size());
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k)
        v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
    return v;
}

std::uint32_t get_u32(std::istream& in)
{
    std::array<unsigned char, 4> b;
    read_exact(in, reinterpret_cast<char*>(b.data()), b.size());
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k)
        v |= static_cast<std::uint32_t>(b[k]) << (8 * k);
    return v;
}

std::int32_t get_i32(std::istream& in)
{
    return static_cast<std::int32_t>(get_u32(in));
}

double get_f64(std::istream& in)
{
    return std::bit_cast<double>(get_u64(in));
}

std::vector<double> get_reals(std::istream& in, std::uint64_t n)
{
    if (n > (std::uint64_t{1} << 32))
        throw std::runtime_error("frame file: implausible block size");
    std::vector<double> v(n);
    for (auto& x : v)
        x = get_f64(in);
    return v;
}

} // namespace

void write_frame(const NeedletFrame& frame, std::ostream& out)
{
    out.write(kMagic.data(), kMagic.size());
    put_u32(out, kFrameFormatVersion);
    put_u32(out, frame.basis().kind() == BasisKind::Jacobi ? 0 : 1);
    put_f64(out, frame.basis().jacobi_params().alpha);
    put_f64(out, frame.basis().jacobi_params().beta);
    put_i32(out, frame.jmax());
    put_u32(out, frame.filter().profile().kind() == ProfileKind::PolynomialShape ? 0 : 1);
    put_i32(out, frame.filter().profile().smoothness());
    put_u32(out, frame.convention() == NodeConvention::Exact ? 0 : 1);
    put_u32(out, static_cast<std::uint32_t>(frame.levels().size()));
    for (const auto& level : frame.levels())
    {
        put_i32(out, level.j);
        put_u64(out, level.nodes.size());
        put_u64(out, level.first);
        put_u64(out, level.width);
        put_reals(out, level.nodes);
        put_reals(out, level.weights);
        put_reals(out, level.psi);
    }
    if (!out)
        throw std::runtime_error("failed to write frame");
}

void save_frame(const NeedletFrame& frame, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    write_frame(frame, out);
}

NeedletFrame read_frame(std::istream& in)
{
    std::array<char, 4> magic{};
    read_exact(in, magic.data(), magic.size());
    if (magic != kMagic)
        throw std::runtime_error("not a needlet frame file (bad magic)");
    const auto version = get_u32(in);
    if (version != kFrameFormatVersion)
        throw std::runtime_error("unsupported frame format version " + std::to_string(version));
    const auto basis_kind = get_u32(in);
    const double alpha = get_f64(in);
    const double beta = get_f64(in);
    const int jmax = get_i32(in);
    const auto profile_kind = get_u32(in);
    const int m = get_i32(in);
    const auto convention = get_u32(in);
    const auto count = get_u32(in);
    if (basis_kind > 1 || profile_kind > 1 || convention > 1 || jmax < 0 || jmax > 20 ||
        count != static_cast<std::uint32_t>(jmax + 2))
        throw std::runtime_error("frame file: corrupt header");

    std::vector<FrameLevel> levels(count);
    for (auto& level : levels)
    {
        level.j = get_i32(in);
        const auto nodes = get_u64(in);
        level.first = get_u64(in);
        level.width = get_u64(in);
        level.nodes = get_reals(in, nodes);
        level.weights = get_reals(in, nodes);
        level.psi = get_reals(in, nodes * level.width);
    }

    auto basis = basis_kind == 0 ? BasisFamily::jacobi(JacobiParams::make(alpha, beta)) : BasisFamily::fourier();
    Filter filter(make_profile(profile_kind == 0 ? ProfileKind::PolynomialShape : ProfileKind::SmoothExponential, m));
    return NeedletFrame(std::move(basis), std::move(filter), jmax,
                        convention == 0 ? NodeConvention::Exact : NodeConvention::Paper, std::move(levels));
}

NeedletFrame load_frame(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    return read_frame(in);
}

} // namespace needd
