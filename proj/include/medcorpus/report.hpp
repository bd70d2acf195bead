#pragma once

#include <string>
#include <vector>

#include "medcorpus/metrics.hpp"

namespace medcorpus {

struct ReportEntry {
    std::string model;
    std::string task;
    MetricReport metrics;
};

// Requires "model" and "task" next to the MetricReport fields.
ReportEntry report_entry_from_json(const nlohmann::json& j);

struct RenderedReport {
    std::string markdown;
    std::vector<std::string> warnings;
};

// One row per model, F1/P/R (+EM when any entry of the task has it) per
// task. Entries sharing (model, task) are folds and render as mean ± std.
// The best mean in each column is bolded; missing cells render as "-".
RenderedReport render_report(const std::vector<ReportEntry>& entries);

}  // namespace medcorpus
