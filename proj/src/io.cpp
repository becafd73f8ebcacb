#include "fbra/io.hpp"

#include "fbra/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <sstream>

namespace fbra {

OutputFormat parse_format(std::string_view text) {
    if (text == "csv") return OutputFormat::CSV;
    if (text == "json") return OutputFormat::JSON;
    raise(ErrorKind::InvalidArgument, "unknown format '" + std::string(text) + "'");
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_cell(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return "";
            else if constexpr (std::is_same_v<T, double>) return format_number(v);
            else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else return csv_escape(v);
        },
        cell);
}

nlohmann::ordered_json json_cell(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
            else return v;
        },
        cell);
}

Cell opt(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

Cell count(std::uint64_t v) { return Cell{static_cast<std::int64_t>(v)}; }

void push_matrix(Table& t, std::vector<Cell>& row, const std::string& name, const std::optional<Mat2>& m) {
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            t.columns.push_back(name + "_" + std::to_string(r + 1) + std::to_string(c + 1));
            row.push_back(m ? Cell{(*m)(r, c)} : Cell{});
        }
    }
}

}  // namespace

std::string render(const Table& table, OutputFormat format) {
    if (format == OutputFormat::CSV) {
        std::ostringstream os;
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            os << (i ? "," : "") << csv_escape(table.columns[i]);
        }
        os << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
            os << '\n';
        }
        return os.str();
    }

    auto record = [&](const std::vector<Cell>& row) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = json_cell(row[i]);
        return obj;
    };
    nlohmann::ordered_json doc;
    if (table.single_record && table.rows.size() == 1) {
        doc = record(table.rows.front());
    } else {
        doc = nlohmann::ordered_json::array();
        for (const auto& row : table.rows) doc.push_back(record(row));
    }
    return doc.dump(2) + "\n";
}

CsvDocument parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        any = true;
        if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            fields.push_back(std::move(field));
            field.clear();
            records.push_back(std::move(fields));
            fields.clear();
            any = false;
        } else if (c != '\r') {
            field += c;
        }
    }
    if (any || !field.empty() || !fields.empty()) {
        fields.push_back(std::move(field));
        records.push_back(std::move(fields));
    }

    CsvDocument doc;
    if (records.empty()) return doc;
    doc.header = std::move(records.front());
    doc.rows.assign(std::make_move_iterator(records.begin() + 1), std::make_move_iterator(records.end()));
    return doc;
}

Table boundary_table(Scheme scheme, double step) {
    Table t;
    t.columns = {"lambda1", "lambda2"};
    for (double l1 : unit_grid(step, 0.1)) t.rows.push_back({l1, boundary(scheme, l1)});
    return t;
}

Table region_table(const AccessProbabilities& p, double lambda_step) {
    Table t;
    t.columns = {"lambda1", "lambda2", "stable", "binding", "secondary"};
    for (const auto& pt : region_cloud(p, lambda_step)) {
        t.rows.push_back({pt.lambda1, pt.lambda2, pt.verdict.stable, std::string(to_string(pt.verdict.binding)),
                          std::string(to_string(pt.verdict.secondary))});
    }
    return t;
}

Table sweep_table(const RegionDataset& data) {
    Table t;
    t.columns = {"lambda1", "numeric", "lemma2_numeric", "theorem1", "ra", "td", "p1_star", "p2_star"};
    for (const auto& r : data.rows) {
        t.rows.push_back({r.lambda1, r.numeric, r.lemma2_numeric, r.theorem1, r.ra, r.td, r.p1_star, r.p2_star});
    }
    return t;
}

Table sweep_points_table(const RegionDataset& data) {
    Table t;
    t.columns = {"lambda1", "lambda2", "p1", "p2", "stable"};
    for (const auto& pt : data.points) t.rows.push_back({pt.lambda1, pt.lambda2, pt.p1, pt.p2, pt.stable});
    return t;
}

Table simulation_table(const SimulationMetrics& m) {
    Table t;
    t.single_record = true;
    std::vector<Cell> row;
    auto add = [&](std::string name, Cell value) {
        t.columns.push_back(std::move(name));
        row.push_back(std::move(value));
    };
    const auto& c = m.config;
    add("kind", std::string(to_string(c.kind)));
    add("mode", std::string(to_string(c.mode)));
    add("p1", c.p.p1());
    add("p2", c.p.p2());
    add("lambda1", c.l.l1());
    add("lambda2", c.l.l2());
    add("slots", count(c.horizon));
    add("warmup", count(c.warmup.value_or(0)));
    add("seed", count(c.seed));
    add("batches", count(c.batches));
    add("measured_slots", count(m.measured_slots));
    for (int q = 0; q < 2; ++q) {
        const auto& qm = m.queues[q];
        const std::string pre = "q" + std::to_string(q + 1) + "_";
        add(pre + "arrivals", count(qm.arrivals));
        add(pre + "delivered", count(qm.delivered));
        add(pre + "successes", count(qm.successes));
        add(pre + "busy_slots", count(qm.busy_slots));
        add(pre + "empirical_mu", qm.empirical_mu);
        add(pre + "mu_std_error", qm.mu_std_error);
        add(pre + "mean_length", qm.mean_length);
        add(pre + "final_length", count(qm.final_length));
        add(pre + "max_length", count(qm.max_length));
        add(pre + "drift", qm.drift);
        add(pre + "verdict", std::string(to_string(qm.verdict)));
    }
    add("backoff_occupancy", m.backoff_occupancy);
    add("backoff_std_error", m.backoff_std_error);
    for (std::size_t o = 0; o < m.outcome_counts.size(); ++o) {
        add("count_" + std::string(to_string(static_cast<SlotOutcome>(o))), count(m.outcome_counts[o]));
    }
    add("total_drift", m.total_drift);
    t.rows.push_back(std::move(row));
    return t;
}

Table qbd_table(const QbdReport& r) {
    Table t;
    t.single_record = true;
    std::vector<Cell> row;
    auto add = [&](std::string name, Cell value) {
        t.columns.push_back(std::move(name));
        row.push_back(std::move(value));
    };
    add("p1", r.p1);
    add("p2", r.p2);
    add("lambda2", r.l2);
    push_matrix(t, row, "b", r.blocks.b);
    push_matrix(t, row, "a0", r.blocks.a0);
    push_matrix(t, row, "a1", r.blocks.a1);
    push_matrix(t, row, "a2", r.blocks.a2);
    push_matrix(t, row, "r_closed", r.r_closed);
    push_matrix(t, row, "r_iterative", r.r_iterative ? std::optional<Mat2>(r.r_iterative->r) : std::nullopt);
    add("r_closed_residual", opt(r.r_closed_residual));
    add("r_iterative_residual", r.r_iterative ? Cell{r.r_iterative->residual} : Cell{});
    add("r_iterations", r.r_iterative ? count(r.r_iterative->iterations) : Cell{});
    std::optional<double> r_gap;
    if (r.r_closed && r.r_iterative) r_gap = (*r.r_closed - r.r_iterative->r).max_abs();
    add("r_route_gap", opt(r_gap));
    add("sp_eigen", opt(r.sp_eigen));
    add("sp_closed", opt(r.sp_closed));
    add("pi0", opt(r.pi0));
    add("mu1_closed", opt(r.mu1_closed));
    add("mu1_series", opt(r.mu1_series));
    add("normalization_error", opt(r.normalization_error));
    add("stable", r.stable);
    add("diagnostic", r.diagnostic);
    t.rows.push_back(std::move(row));
    return t;
}

}  // namespace fbra
