#include "needd/needlet_frame.hpp"

#include <algorithm>
#include <stdexcept>

namespace needd
{

namespace
{

void check_analysis_input(const NeedletFrame& frame, std::span<const double> f)
{
    if (f.size() < frame.dimension())
        throw std::invalid_argument("analyze: coefficient vector shorter than the frame dimension (" +
                                    std::to_string(f.size()) + " < " + std::to_string(frame.dimension()) +
                                    ")");
}

void check_synthesis_input(const NeedletFrame& frame, const NeedletCoefficients& beta)
{
    const auto levels = frame.levels();
    if (beta.levels.size() != levels.size())
        throw std::invalid_argument("synthesize: level count mismatch");
    for (std::size_t l = 0; l < levels.size(); ++l)
        if (beta.levels[l].size() != levels[l].node_count())
            throw std::invalid_argument("synthesize: node count mismatch at level " +
                                        std::to_string(levels[l].j));
}

double row_dot(const FrameLevel& level, std::size_t nu, std::span<const double> f)
{
    const double* row = level.psi.data() + nu * level.width;
    const double* x = f.data() + level.first;
    double sum = 0.0;
    for (std::size_t c = 0; c < level.width; ++c)
        sum += row[c] * x[c];
    return sum;
}

} // namespace

NeedletCoefficients analyze(const NeedletFrame& frame, std::span<const double> f)
{
    check_analysis_input(frame, f);
    auto beta = NeedletCoefficients::zeros_like(frame);
    const auto levels = frame.levels();
    for (std::size_t l = 0; l < levels.size(); ++l)
    {
        const auto& level = levels[l];
        auto& out = beta.levels[l];
        const auto count = static_cast<std::ptrdiff_t>(level.node_count());
#pragma omp parallel for schedule(static) if (count >= 64)
        for (std::ptrdiff_t nu = 0; nu < count; ++nu)
            out[static_cast<std::size_t>(nu)] = row_dot(level, static_cast<std::size_t>(nu), f);
    }
    return beta;
}

std::vector<double> synthesize(const NeedletFrame& frame, const NeedletCoefficients& beta)
{
    check_synthesis_input(frame, beta);
    std::vector<double> out(frame.dimension(), 0.0);
    const auto levels = frame.levels();
    for (std::size_t l = 0; l < levels.size(); ++l)
    {
        const auto& level = levels[l];
        const auto& b = beta.levels[l];
        const std::size_t nodes = level.node_count();
        // column blocks keep row access contiguous; each block sums in the serial order
        constexpr std::size_t block = 256;
        const auto blocks = static_cast<std::ptrdiff_t>((level.width + block - 1) / block);
#pragma omp parallel for schedule(static) if (level.width >= 2 * block)
        for (std::ptrdiff_t k = 0; k < blocks; ++k)
        {
            const std::size_t c0 = static_cast<std::size_t>(k) * block;
            const std::size_t c1 = std::min(level.width, c0 + block);
            double* dst = out.data() + level.first;
            for (std::size_t nu = 0; nu < nodes; ++nu)
            {
                const double bn = b[nu];
                const double* row = level.psi.data() + nu * level.width;
                for (std::size_t c = c0; c < c1; ++c)
                    dst[c] += bn * row[c];
            }
        }
    }
    return out;
}

namespace serial
{

NeedletCoefficients analyze(const NeedletFrame& frame, std::span<const double> f)
{
    check_analysis_input(frame, f);
    auto beta = NeedletCoefficients::zeros_like(frame);
    const auto levels = frame.levels();
    for (std::size_t l = 0; l < levels.size(); ++l)
        for (std::size_t nu = 0; nu < levels[l].node_count(); ++nu)
            beta.levels[l][nu] = row_dot(levels[l], nu, f);
    return beta;
}

std::vector<double> synthesize(const NeedletFrame& frame, const NeedletCoefficients& beta)
{
    check_synthesis_input(frame, beta);
    std::vector<double> out(frame.dimension(), 0.0);
    const auto levels = frame.levels();
    for (std::size_t l = 0; l < levels.size(); ++l)
    {
        const auto& level = levels[l];
        for (std::size_t nu = 0; nu < level.node_count(); ++nu)
        {
            const double b = beta.levels[l][nu];
            const auto row = level.row(nu);
            for (std::size_t c = 0; c < level.width; ++c)
                out[level.first + c] += b * row[c];
        }
    }
    return out;
}

} // namespace serial

} // namespace needd
