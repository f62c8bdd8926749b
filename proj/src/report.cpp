#include "needd/simlab.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace needd
{

namespace
{

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string format_csv(const SimulationReport& report)
{
    std::ostringstream os;
    os << "loss,target";
    for (const auto& est : report.estimators)
        for (double r : report.rsnr)
            os << ',' << csv_field(est + " rsnr=" + num(r));
    os << "\r\n";
    if (report.cells.empty())
        return os.str();

    for (int loss = 0; loss < 2; ++loss)
    {
        for (const auto& target : report.targets)
        {
            os << (loss == 0 ? "L1" : "RMSE") << ',' << csv_field(target);
            for (const auto& est : report.estimators)
                for (double r : report.rsnr)
                {
                    const auto& c = report.cell(target, r, est);
                    os << ',' << num(loss == 0 ? c.mean_l1 : c.mean_rmse);
                }
            os << "\r\n";
        }
    }
    return os.str();
}

std::string format_json(const SimulationReport& report)
{
    nlohmann::json j;
    j["seed"] = report.seed;
    j["targets"] = report.targets;
    j["rsnr"] = report.rsnr;
    j["estimators"] = report.estimators;
    j["cells"] = nlohmann::json::array();
    for (const auto& c : report.cells)
    {
        j["cells"].push_back({
            {"target", c.target},
            {"rsnr", c.rsnr},
            {"noise_index", c.noise_index},
            {"estimator", c.estimator},
            {"epsilon", c.epsilon},
            {"l1", c.l1},
            {"rmse", c.rmse},
            {"seeds", c.seeds},
            {"mean_l1", c.mean_l1},
            {"mean_rmse", c.mean_rmse},
            {"se_l1", c.se_l1},
            {"se_rmse", c.se_rmse},
        });
    }
    return j.dump(2) + "\n";
}

} // namespace

std::string format_report(const SimulationReport& report, ReportFormat format)
{
    return format == ReportFormat::Csv ? format_csv(report) : format_json(report);
}

void emit_report(const SimulationReport& report, ReportFormat format, const std::string& path)
{
    const auto text = format_report(report, format);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    if (!out)
        throw std::runtime_error("failed writing " + path);
}

SimulationReport parse_report_json(const std::string& json_text)
{
    SimulationReport report;
    try
    {
        const auto j = nlohmann::json::parse(json_text);
        report.seed = j.at("seed").get<std::uint64_t>();
        report.targets = j.at("targets").get<std::vector<std::string>>();
        report.rsnr = j.at("rsnr").get<std::vector<double>>();
        report.estimators = j.at("estimators").get<std::vector<std::string>>();
        for (const auto& cj : j.at("cells"))
        {
            CellResult c;
            c.target = cj.at("target").get<std::string>();
            c.rsnr = cj.at("rsnr").get<double>();
            c.noise_index = cj.at("noise_index").get<std::size_t>();
            c.estimator = cj.at("estimator").get<std::string>();
            c.epsilon = cj.at("epsilon").get<double>();
            c.l1 = cj.at("l1").get<std::vector<double>>();
            c.rmse = cj.at("rmse").get<std::vector<double>>();
            c.seeds = cj.at("seeds").get<std::vector<std::uint64_t>>();
            c.mean_l1 = cj.at("mean_l1").get<double>();
            c.mean_rmse = cj.at("mean_rmse").get<double>();
            c.se_l1 = cj.at("se_l1").get<double>();
            c.se_rmse = cj.at("se_rmse").get<double>();
            report.cells.push_back(std::move(c));
        }
    }
    catch (const nlohmann::json::exception& e)
    {
        throw std::invalid_argument(std::string("report json: ") + e.what());
    }
    return report;
}

} // namespace needd
