#pragma once

#include "relcost/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace relcost
{
    /// Everything a command produces; written to disk by write_outputs.
    struct CommandOutputs
    {
        nlohmann::json summary;
        std::string table;
        std::string series_csv;
        std::vector<std::pair<std::string, std::string>> traces; ///< file name, contents
    };

    CommandOutputs cmd_simulate(const ExperimentConfig &config, unsigned jobs = 1);
    CommandOutputs cmd_compare(const ExperimentConfig &config, unsigned jobs = 1);
    CommandOutputs cmd_s2(const ExperimentConfig &config, unsigned jobs = 1);
    CommandOutputs cmd_probe(const ExperimentConfig &config, unsigned jobs = 1);
    CommandOutputs cmd_optimize(const ExperimentConfig &config, unsigned jobs = 1);

    /// summary.json, table.txt, series.csv and one file per trace.
    void write_outputs(const std::filesystem::path &dir, const CommandOutputs &outputs);

    inline constexpr int kExitOk = 0;
    inline constexpr int kExitRuntimeError = 1;
    inline constexpr int kExitConfigError = 2;

    struct CommandRequest
    {
        std::string command;
        std::filesystem::path config;
        std::filesystem::path out = "out";
        std::optional<std::uint64_t> seed_override;
        unsigned jobs = 1;
    };

    /// Loads the config, runs the command and writes the outputs. Reports
    /// problems on `err` and returns an exit status; scientific FAIL rows do
    /// not affect it.
    int run_command(const CommandRequest &request, std::ostream &out, std::ostream &err);

} // namespace relcost
