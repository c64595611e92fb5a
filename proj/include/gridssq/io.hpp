#pragma once

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "gridssq/domain.hpp"
#include "gridssq/errors.hpp"
#include "gridssq/evolution.hpp"
#include "gridssq/neural.hpp"

namespace gridssq {

using nlohmann::json;

inline constexpr std::string_view model_schema = "grid-ssq-mlp/1";

// Shortest decimal string that parses back to the same double; keeps CSV
// artifacts byte-stable across runs.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Error(ErrorKind::IoError, "read failed for " + path.string());
    return std::move(buf).str();
}

// All artifact writers funnel through here: write to a sibling temp file,
// then rename over the target so readers never observe a partial file.
inline void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw Error(ErrorKind::IoError, "cannot create directory " + path.parent_path().string());
    }
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::IoError, "cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw Error(ErrorKind::IoError, "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot rename " + tmp.string() + " to " + path.string());
}

namespace detail {

inline void expect_keys(const json& obj, std::initializer_list<const char*> keys,
                        const std::string& context) {
    if (!obj.is_object()) throw Error(ErrorKind::ParseError, context + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* k : keys)
            if (key == k) {
                known = true;
                break;
            }
        if (!known)
            throw Error(ErrorKind::UnknownField, context + ": unexpected field \"" + key + "\"");
    }
    for (const char* k : keys)
        if (!obj.contains(k))
            throw Error(ErrorKind::ParseError, context + ": missing field \"" + std::string(k) + "\"");
}

inline double get_number(const json& obj, const char* key, const std::string& context) {
    const json& v = obj.at(key);
    if (!v.is_number())
        throw Error(ErrorKind::ParseError, context + ": field \"" + key + "\" must be a number");
    return v.get<double>();
}

inline std::string get_string(const json& obj, const char* key, const std::string& context) {
    const json& v = obj.at(key);
    if (!v.is_string())
        throw Error(ErrorKind::ParseError, context + ": field \"" + key + "\" must be a string");
    return v.get<std::string>();
}

inline std::vector<double> get_number_array(const json& v, const std::string& context) {
    if (!v.is_array()) throw Error(ErrorKind::ParseError, context + ": expected an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number())
            throw Error(ErrorKind::ParseError, context + ": expected numeric entries");
        out.push_back(e.get<double>());
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------- inventory

inline void write_inventory(const std::filesystem::path& path, const NetworkInventory& inv) {
    json hosts = json::array();
    for (const auto& host : inv.hosts) {
        json services = json::array();
        for (const auto& svc : host.services)
            services.push_back({{"service_id", svc.service_id}, {"si", svc.si}});
        hosts.push_back({{"host_id", host.host_id},
                         {"hi", host.hi},
                         {"perf_degradation", host.perf_degradation},
                         {"services", services}});
    }
    atomic_write_text(path, json{{"hosts", hosts}}.dump(2) + "\n");
}

inline NetworkInventory read_inventory(const std::filesystem::path& path) {
    const json doc = json::parse(read_text_file(path), nullptr, false);
    if (doc.is_discarded())
        throw Error(ErrorKind::ParseError, path.string() + ": not valid JSON");
    detail::expect_keys(doc, {"hosts"}, path.string());
    if (!doc.at("hosts").is_array())
        throw Error(ErrorKind::ParseError, path.string() + ": \"hosts\" must be an array");

    NetworkInventory inv;
    for (const auto& h : doc.at("hosts")) {
        detail::expect_keys(h, {"host_id", "hi", "perf_degradation", "services"}, path.string());
        HostSpec host;
        host.host_id = detail::get_string(h, "host_id", path.string());
        host.hi = detail::get_number(h, "hi", path.string());
        host.perf_degradation = detail::get_number(h, "perf_degradation", path.string());
        if (!h.at("services").is_array())
            throw Error(ErrorKind::ParseError, path.string() + ": \"services\" must be an array");
        for (const auto& s : h.at("services")) {
            detail::expect_keys(s, {"service_id", "si"}, path.string());
            ServiceSpec svc;
            svc.service_id = detail::get_string(s, "service_id", path.string());
            svc.si = detail::get_number(s, "si", path.string());
            host.services.push_back(std::move(svc));
        }
        inv.hosts.push_back(std::move(host));
    }
    validate_inventory(inv);
    return inv;
}

// --------------------------------------------------------------- event logs

inline void write_event_log(const std::filesystem::path& path,
                            const std::vector<AttackEvent>& events) {
    std::string out;
    for (const auto& ev : events) {
        out += json{{"t", ev.t},
                    {"host_id", ev.host_id},
                    {"service_id", ev.service_id},
                    {"attack_type", ev.attack_type},
                    {"severity", ev.severity}}
                   .dump();
        out += '\n';
    }
    atomic_write_text(path, out);
}

// JSON Lines, one event per line; errors carry 1-based line numbers.
inline std::vector<AttackEvent> parse_event_log(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    std::vector<AttackEvent> events;
    std::istringstream lines(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string context = path.string() + ":" + std::to_string(line_no);
        const json doc = json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.is_object())
            throw Error(ErrorKind::MalformedLine, context + ": not a JSON object");
        try {
            detail::expect_keys(doc, {"t", "host_id", "service_id", "attack_type", "severity"},
                                context);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::UnknownField) throw;
            throw Error(ErrorKind::MalformedLine, e.what());
        }
        AttackEvent ev;
        try {
            ev.t = detail::get_number(doc, "t", context);
            ev.host_id = detail::get_string(doc, "host_id", context);
            ev.service_id = detail::get_string(doc, "service_id", context);
            ev.attack_type = detail::get_string(doc, "attack_type", context);
            ev.severity = detail::get_number(doc, "severity", context);
        } catch (const Error& e) {
            throw Error(ErrorKind::MalformedLine, e.what());
        }
        if (!(ev.t >= 0.0))
            throw Error(ErrorKind::MalformedLine, context + ": timestamp must be >= 0");
        if (!(ev.severity >= 1.0))
            throw Error(ErrorKind::SeverityBelowOne,
                        context + ": severity " + format_double(ev.severity) + " is below 1");
        events.push_back(std::move(ev));
    }
    return events;
}

// ------------------------------------------------------------------- models

inline void write_model(const std::filesystem::path& path, const MlpParams& p) {
    validate_params(p);
    auto matrix = [](const std::vector<double>& flat, std::size_t rows, std::size_t cols) {
        json m = json::array();
        for (std::size_t r = 0; r < rows; ++r) {
            json row = json::array();
            for (std::size_t c = 0; c < cols; ++c) row.push_back(flat[r * cols + c]);
            m.push_back(std::move(row));
        }
        return m;
    };
    const json doc{{"schema", std::string(model_schema)},
                   {"n", p.inputs},
                   {"l", p.hidden},
                   {"m", p.outputs},
                   {"w_ih", matrix(p.w_ih, p.hidden, p.inputs)},
                   {"w_ho", matrix(p.w_ho, p.outputs, p.hidden)},
                   {"a", p.a},
                   {"b", p.b},
                   {"norm",
                    {{"x_min", p.norm.x_min},
                     {"x_max", p.norm.x_max},
                     {"y_min", p.norm.y_min},
                     {"y_max", p.norm.y_max}}}};
    atomic_write_text(path, doc.dump(2) + "\n");
}

inline MlpParams read_model(const std::filesystem::path& path) {
    const std::string context = path.string();
    const json doc = json::parse(read_text_file(path), nullptr, false);
    if (doc.is_discarded()) throw Error(ErrorKind::ParseError, context + ": not valid JSON");
    detail::expect_keys(doc, {"schema", "n", "l", "m", "w_ih", "w_ho", "a", "b", "norm"}, context);
    const std::string schema = detail::get_string(doc, "schema", context);
    if (schema != model_schema)
        throw Error(ErrorKind::SchemaMismatch,
                    context + ": schema \"" + schema + "\" is not \"" + std::string(model_schema) + "\"");

    MlpParams p;
    p.inputs = static_cast<std::size_t>(detail::get_number(doc, "n", context));
    p.hidden = static_cast<std::size_t>(detail::get_number(doc, "l", context));
    p.outputs = static_cast<std::size_t>(detail::get_number(doc, "m", context));

    auto read_matrix = [&](const char* key, std::size_t rows, std::size_t cols) {
        const json& m = doc.at(key);
        if (!m.is_array() || m.size() != rows)
            throw Error(ErrorKind::SchemaMismatch,
                        context + ": \"" + key + "\" must have " + std::to_string(rows) + " rows");
        std::vector<double> flat;
        flat.reserve(rows * cols);
        for (const auto& row : m) {
            const std::vector<double> r = detail::get_number_array(row, context);
            if (r.size() != cols)
                throw Error(ErrorKind::SchemaMismatch,
                            context + ": \"" + key + "\" rows must have " + std::to_string(cols) +
                                " entries");
            flat.insert(flat.end(), r.begin(), r.end());
        }
        return flat;
    };
    p.w_ih = read_matrix("w_ih", p.hidden, p.inputs);
    p.w_ho = read_matrix("w_ho", p.outputs, p.hidden);
    p.a = detail::get_number_array(doc.at("a"), context);
    p.b = detail::get_number_array(doc.at("b"), context);

    const json& norm = doc.at("norm");
    detail::expect_keys(norm, {"x_min", "x_max", "y_min", "y_max"}, context + ": norm");
    p.norm.x_min = detail::get_number_array(norm.at("x_min"), context);
    p.norm.x_max = detail::get_number_array(norm.at("x_max"), context);
    p.norm.y_min = detail::get_number_array(norm.at("y_min"), context);
    p.norm.y_max = detail::get_number_array(norm.at("y_max"), context);

    try {
        validate_params(p);
    } catch (const Error& e) {
        throw Error(ErrorKind::SchemaMismatch, context + ": " + e.what());
    }
    if (p.norm.x_min.size() != p.inputs || p.norm.x_max.size() != p.inputs ||
        p.norm.y_min.size() != p.outputs || p.norm.y_max.size() != p.outputs)
        throw Error(ErrorKind::SchemaMismatch, context + ": normalization shapes do not match n/m");
    return p;
}

// -------------------------------------------------- normalization sidecars

inline void write_norm_meta(const std::filesystem::path& path, const NormalizationMeta& meta) {
    const json doc{{"x_min", meta.x_min},
                   {"x_max", meta.x_max},
                   {"y_min", meta.y_min},
                   {"y_max", meta.y_max}};
    atomic_write_text(path, doc.dump(2) + "\n");
}

inline NormalizationMeta read_norm_meta(const std::filesystem::path& path) {
    const std::string context = path.string();
    const json doc = json::parse(read_text_file(path), nullptr, false);
    if (doc.is_discarded()) throw Error(ErrorKind::ParseError, context + ": not valid JSON");
    detail::expect_keys(doc, {"x_min", "x_max", "y_min", "y_max"}, context);
    NormalizationMeta meta;
    meta.x_min = detail::get_number_array(doc.at("x_min"), context);
    meta.x_max = detail::get_number_array(doc.at("x_max"), context);
    meta.y_min = detail::get_number_array(doc.at("y_min"), context);
    meta.y_max = detail::get_number_array(doc.at("y_max"), context);
    if (meta.x_min.size() != meta.x_max.size() || meta.y_min.size() != meta.y_max.size())
        throw Error(ErrorKind::ParseError, context + ": min/max lengths differ");
    return meta;
}

// ----------------------------------------------------------------- datasets

inline void write_dataset_csv(const std::filesystem::path& path,
                              const std::vector<Sample>& samples) {
    if (samples.empty())
        throw Error(ErrorKind::EmptyDataset, "refusing to write an empty dataset to " + path.string());
    std::string out;
    const std::size_t n = samples.front().x.size();
    for (std::size_t i = 0; i < n; ++i) {
        out += "f" + std::to_string(i + 1);
        out += ',';
    }
    out += "y\n";
    for (const auto& s : samples) {
        for (double v : s.x) {
            out += format_double(v);
            out += ',';
        }
        out += format_double(s.y.at(0));
        out += '\n';
    }
    atomic_write_text(path, out);
}

inline std::vector<Sample> read_dataset_csv(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    std::istringstream lines(text);
    std::string line;
    if (!std::getline(lines, line))
        throw Error(ErrorKind::ParseError, path.string() + ": empty file, expected a header");

    std::vector<std::string> columns;
    {
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) columns.push_back(cell);
    }
    if (columns.size() < 2 || columns.back() != "y")
        throw Error(ErrorKind::ParseError, path.string() + ": header must be f1..fN,y");
    for (std::size_t i = 0; i + 1 < columns.size(); ++i)
        if (columns[i] != "f" + std::to_string(i + 1))
            throw Error(ErrorKind::ParseError, path.string() + ": header must be f1..fN,y");
    const std::size_t n = columns.size() - 1;

    std::vector<Sample> samples;
    std::size_t line_no = 1;
    while (std::getline(lines, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string context = path.string() + ":" + std::to_string(line_no);
        Sample s;
        s.x.reserve(n);
        std::size_t begin = 0;
        std::size_t field = 0;
        while (true) {
            const std::size_t end = line.find(',', begin);
            const std::string_view cell(line.data() + begin,
                                        (end == std::string::npos ? line.size() : end) - begin);
            double v = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
                throw Error(ErrorKind::ParseError, context + ": bad number \"" + std::string(cell) + "\"");
            if (field < n)
                s.x.push_back(v);
            else
                s.y.push_back(v);
            ++field;
            if (end == std::string::npos) break;
            begin = end + 1;
        }
        if (field != n + 1)
            throw Error(ErrorKind::ParseError,
                        context + ": expected " + std::to_string(n + 1) + " fields, got " +
                            std::to_string(field));
        samples.push_back(std::move(s));
    }
    return samples;
}

// ------------------------------------------------------------- CSV reports

inline void write_situation_csv(const std::filesystem::path& path, const NetworkInventory& inv,
                                const std::vector<SituationRecord>& records) {
    std::string out = "window_index,r_lq";
    for (const auto& host : inv.hosts) out += ",tr_" + host.host_id + ",rh_" + host.host_id;
    for (const auto& host : inv.hosts)
        for (const auto& svc : host.services) out += ",rs_" + host.host_id + "_" + svc.service_id;
    out += '\n';
    for (const auto& rec : records) {
        out += std::to_string(rec.window_index);
        out += ',';
        out += format_double(rec.r_lq);
        for (std::size_t h = 0; h < inv.hosts.size(); ++h) {
            out += ',';
            out += format_double(rec.host_tr.at(h));
            out += ',';
            out += format_double(rec.host_rh.at(h));
        }
        for (std::size_t h = 0; h < inv.hosts.size(); ++h)
            for (std::size_t j = 0; j < inv.hosts[h].services.size(); ++j) {
                out += ',';
                out += format_double(rec.service_rs.at(h).at(j));
            }
        out += '\n';
    }
    atomic_write_text(path, out);
}

inline void write_history_csv(const std::filesystem::path& path,
                              const std::vector<GenerationStats>& history) {
    std::string out = "generation,best_fitness,mean_fitness\n";
    for (const auto& g : history) {
        out += std::to_string(g.generation);
        out += ',';
        out += format_double(g.best_fitness);
        out += ',';
        out += format_double(g.mean_fitness);
        out += '\n';
    }
    atomic_write_text(path, out);
}

struct ReportRow {
    std::size_t index = 0;
    double actual = 0.0;
    double predicted = 0.0;
    double error = 0.0;
};

inline void write_report_csv(const std::filesystem::path& path,
                             const std::vector<ReportRow>& rows) {
    std::string out = "index,actual,predicted,error\n";
    for (const auto& r : rows) {
        out += std::to_string(r.index);
        out += ',';
        out += format_double(r.actual);
        out += ',';
        out += format_double(r.predicted);
        out += ',';
        out += format_double(r.error);
        out += '\n';
    }
    atomic_write_text(path, out);
}

// ---------------------------------------------------------------- manifests

// Sidecar written next to every artifact. `resolved_args` replays the run:
// invoking the tool with exactly those arguments reproduces every data
// artifact byte for byte (the manifest itself records wall-clock duration,
// so manifests are not part of the byte-identity contract).
struct RunManifest {
    std::string command;
    json config = json::object();
    std::vector<std::string> resolved_args;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::string tool_version;
    double duration_seconds = 0.0;
};

inline void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
    const json doc{{"command", m.command},
                   {"config", m.config},
                   {"resolved_args", m.resolved_args},
                   {"inputs", m.inputs},
                   {"outputs", m.outputs},
                   {"tool_version", m.tool_version},
                   {"duration_seconds", m.duration_seconds}};
    atomic_write_text(path, doc.dump(2) + "\n");
}

inline RunManifest read_manifest(const std::filesystem::path& path) {
    const std::string context = path.string();
    const json doc = json::parse(read_text_file(path), nullptr, false);
    if (doc.is_discarded()) throw Error(ErrorKind::ParseError, context + ": not valid JSON");
    detail::expect_keys(
        doc, {"command", "config", "resolved_args", "inputs", "outputs", "tool_version",
              "duration_seconds"},
        context);
    RunManifest m;
    m.command = detail::get_string(doc, "command", context);
    m.config = doc.at("config");
    for (const auto& a : doc.at("resolved_args")) m.resolved_args.push_back(a.get<std::string>());
    for (const auto& a : doc.at("inputs")) m.inputs.push_back(a.get<std::string>());
    for (const auto& a : doc.at("outputs")) m.outputs.push_back(a.get<std::string>());
    m.tool_version = detail::get_string(doc, "tool_version", context);
    m.duration_seconds = detail::get_number(doc, "duration_seconds", context);
    return m;
}

}  // namespace gridssq
