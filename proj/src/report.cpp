#include "medcorpus/report.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

#include "medcorpus/error.hpp"
#include "medcorpus/experiments.hpp"

namespace medcorpus {

ReportEntry report_entry_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("model") || !j.contains("task")) {
        throw DataError("metric report needs \"model\" and \"task\" fields");
    }
    return {j.at("model").get<std::string>(), j.at("task").get<std::string>(), metric_report_from_json(j)};
}

namespace {

enum class Column { F1, P, R, EM };

const char* column_name(Column c) {
    switch (c) {
        case Column::F1:
            return "F1";
        case Column::P:
            return "P";
        case Column::R:
            return "R";
        case Column::EM:
            return "EM";
    }
    return "?";
}

double pick(const MetricReport& r, Column c) {
    switch (c) {
        case Column::F1:
            return r.f1;
        case Column::P:
            return r.precision;
        case Column::R:
            return r.recall;
        case Column::EM:
            return r.em.value_or(0.0);
    }
    return 0.0;
}

template <typename T>
std::size_t slot(std::vector<T>& order, const T& value) {
    const auto it = std::find(order.begin(), order.end(), value);
    if (it != order.end()) {
        return static_cast<std::size_t>(it - order.begin());
    }
    order.push_back(value);
    return order.size() - 1;
}

}  // namespace

RenderedReport render_report(const std::vector<ReportEntry>& entries) {
    std::vector<std::string> models;
    std::vector<std::string> tasks;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<MetricReport>> cells;
    std::vector<bool> task_has_em;
    for (const auto& e : entries) {
        const auto m = slot(models, e.model);
        const auto t = slot(tasks, e.task);
        task_has_em.resize(tasks.size(), false);
        task_has_em[t] = task_has_em[t] || e.metrics.em.has_value();
        cells[{m, t}].push_back(e.metrics);
    }

    RenderedReport out;
    for (std::size_t m = 0; m < models.size(); ++m) {
        for (std::size_t t = 0; t < tasks.size(); ++t) {
            if (!cells.contains({m, t})) {
                out.warnings.push_back("model " + models[m] + " has no results for task " + tasks[t]);
            }
        }
    }

    struct ColumnSpec {
        std::size_t task;
        Column column;
    };
    std::vector<ColumnSpec> columns;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        for (const auto c : {Column::F1, Column::P, Column::R}) {
            columns.push_back({t, c});
        }
        if (task_has_em[t]) {
            columns.push_back({t, Column::EM});
        }
    }

    // values[m][col]
    std::vector<std::vector<std::optional<AggregateScore>>> values(models.size(),
                                                                   std::vector<std::optional<AggregateScore>>(columns.size()));
    for (std::size_t m = 0; m < models.size(); ++m) {
        for (std::size_t col = 0; col < columns.size(); ++col) {
            const auto it = cells.find({m, columns[col].task});
            if (it == cells.end()) {
                continue;
            }
            std::vector<double> folds;
            for (const auto& r : it->second) {
                folds.push_back(pick(r, columns[col].column));
            }
            values[m][col] = aggregate(folds);
        }
    }

    std::ostringstream md;
    md << "| Model |";
    for (const auto& spec : columns) {
        md << ' ' << (tasks.size() > 1 ? tasks[spec.task] + " " : std::string{}) << column_name(spec.column) << " |";
    }
    md << "\n|---|";
    for (std::size_t col = 0; col < columns.size(); ++col) {
        md << "---:|";
    }
    md << '\n';
    for (std::size_t m = 0; m < models.size(); ++m) {
        md << "| " << models[m] << " |";
        for (std::size_t col = 0; col < columns.size(); ++col) {
            const auto& v = values[m][col];
            if (!v) {
                md << " - |";
                continue;
            }
            bool best = true;
            for (std::size_t other = 0; other < models.size(); ++other) {
                if (values[other][col] && values[other][col]->mean > v->mean) {
                    best = false;
                }
            }
            const auto cell = format_aggregate(*v);
            md << ' ' << (best ? "**" + cell + "**" : cell) << " |";
        }
        md << '\n';
    }
    out.markdown = md.str();
    return out;
}

}  // namespace medcorpus
