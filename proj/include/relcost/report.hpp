#pragma once

#include "relcost/cost.hpp"
#include "relcost/estimate.hpp"
#include "relcost/optimize.hpp"
#include "relcost/probes.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace relcost
{
    /// Shortest round-trip decimal, '.' separator; "inf" / "-inf" / "nan"
    /// for non-finite values.
    std::string format_number(double x);

    /// Numbers stay JSON numbers; non-finite values become the strings above.
    nlohmann::json json_number(double x);

    class TextTable
    {
    public:
        explicit TextTable(std::vector<std::string> header);

        void add_row(std::vector<std::string> row);
        std::string render() const;

    private:
        std::vector<std::string> m_header;
        std::vector<std::vector<std::string>> m_rows;
    };

    std::string csv_line(const std::vector<std::string> &fields);

    nlohmann::json to_json(const ProtocolSpec &spec);
    nlohmann::json to_json(const CostBreakdown &b);
    nlohmann::json to_json(const EstimateReport &r);
    nlohmann::json to_json(const std::vector<S2Point> &curve);
    nlohmann::json to_json(const GrowthReport &r);
    nlohmann::json to_json(const ImpossibilityReport &r);
    nlohmann::json to_json(const LambdaEstimate &e);
    nlohmann::json to_json(const DeltaCurve &c);

    std::string estimates_table(const std::vector<EstimateReport> &reports);
    std::string avg_series_csv(const AvgCostSeries &series);

} // namespace relcost
