#include "hifd/csv_io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

namespace hifd {
namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::io, "cannot open " + path + " for writing");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open " + path);
    return in;
}

void flush_or_fail(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) fail(ErrorCode::io, "write to " + path + " failed");
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t begin = 0;
    while (true) {
        const std::size_t comma = line.find(',', begin);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(begin));
            return fields;
        }
        fields.push_back(line.substr(begin, comma - begin));
        begin = comma + 1;
    }
}

}  // namespace

std::string format_double(double value) {
    char buf[32];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    if (result.ec != std::errc{}) fail(ErrorCode::internal, "double formatting failed");
    return std::string(buf, result.ptr);
}

double parse_double(const std::string& text, const std::string& context) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc{} || result.ptr != end)
        fail(ErrorCode::invalid_input, context + ": not a number: '" + text + "'");
    return value;
}

std::string meta_path_for(const std::string& csv_path) {
    std::filesystem::path p(csv_path);
    p.replace_extension(".meta");
    return p.string();
}

void save_waveform_csv(const WaveformRecord& record, const std::string& csv_path) {
    record.validate();
    auto out = open_out(csv_path);
    out << "sample_index";
    for (const auto& phase : record.phases) out << ",phase_" << phase.name;
    out << "\n";
    const std::int64_t n = record.length();
    std::string line;
    for (std::int64_t i = 0; i < n; ++i) {
        line.clear();
        line += std::to_string(i);
        for (const auto& phase : record.phases) {
            line += ',';
            line += format_double(phase.samples[static_cast<std::size_t>(i)]);
        }
        line += '\n';
        out << line;
    }
    flush_or_fail(out, csv_path);

    nlohmann::json meta;
    meta["format_version"] = 1;
    meta["ts"] = record.ts;
    meta["sample_rate_hz"] = record.sample_rate_hz;
    if (record.label) {
        meta["label"] = {{"fault_start_sample", record.label->fault_start_sample},
                         {"fault_end_sample", record.label->fault_end_sample},
                         {"faulted_phase", record.label->faulted_phase}};
    } else {
        meta["label"] = nullptr;
    }
    const std::string meta_path = meta_path_for(csv_path);
    auto meta_out = open_out(meta_path);
    meta_out << meta.dump(2) << "\n";
    flush_or_fail(meta_out, meta_path);
}

WaveformRecord load_waveform_csv(const std::string& csv_path) {
    const std::string meta_path = meta_path_for(csv_path);
    nlohmann::json meta;
    {
        auto meta_in = open_in(meta_path);
        try {
            meta_in >> meta;
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorCode::invalid_input, meta_path + ": " + e.what());
        }
    }
    WaveformRecord record;
    try {
        if (meta.at("format_version").get<int>() != 1)
            fail(ErrorCode::version, meta_path + ": unsupported format_version");
        record.ts = meta.at("ts").get<int>();
        record.sample_rate_hz = meta.at("sample_rate_hz").get<double>();
        if (!meta.at("label").is_null()) {
            const auto& l = meta.at("label");
            record.label = FaultLabel{l.at("fault_start_sample").get<std::int64_t>(),
                                      l.at("fault_end_sample").get<std::int64_t>(),
                                      l.at("faulted_phase").get<std::string>()};
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::invalid_input, meta_path + ": " + e.what());
    }

    auto in = open_in(csv_path);
    std::string line;
    if (!std::getline(in, line)) fail(ErrorCode::invalid_input, csv_path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "sample_index")
        fail(ErrorCode::invalid_input, csv_path + ": bad header: '" + line + "'");
    for (std::size_t c = 1; c < header.size(); ++c) {
        if (header[c].rfind("phase_", 0) != 0)
            fail(ErrorCode::invalid_input, csv_path + ": bad column name: '" + header[c] + "'");
        record.phases.push_back({header[c].substr(6), {}});
    }

    std::int64_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            fail(ErrorCode::invalid_input,
                 csv_path + " row " + std::to_string(row) + ": wrong field count");
        const std::string context = csv_path + " row " + std::to_string(row);
        const double index = parse_double(fields[0], context);
        if (index != static_cast<double>(row))
            fail(ErrorCode::invalid_input, context + ": sample_index out of order");
        for (std::size_t c = 1; c < fields.size(); ++c)
            record.phases[c - 1].samples.push_back(parse_double(fields[c], context));
        ++row;
    }
    record.validate();
    return record;
}

void save_trace_csv(const std::vector<DetectionOutput>& trace, const std::string& path) {
    auto out = open_out(path);
    out << "cycle_index,phi,limit,above,counter,trip\n";
    std::string line;
    for (const auto& o : trace) {
        line.clear();
        line += std::to_string(o.cycle_index);
        line += ',';
        line += format_double(o.phi);
        line += ',';
        line += format_double(o.limit);
        line += ',';
        line += o.above_limit ? '1' : '0';
        line += ',';
        line += std::to_string(o.counter);
        line += ',';
        line += o.trip_issued ? '1' : '0';
        line += '\n';
        out << line;
    }
    flush_or_fail(out, path);
}

void save_event_log(const std::vector<DetectionEvent>& events, double seconds_per_cycle,
                    const std::string& path) {
    auto out = open_out(path);
    for (const auto& event : events) {
        nlohmann::json j;
        j["kind"] = event.kind == DetectionEvent::Kind::trip ? "trip" : "skipped_cycle";
        j["phase"] = event.phase;
        j["cycle_index"] = event.cycle_index;
        j["time_seconds"] = event.cycle_index * seconds_per_cycle;
        j["detail"] = event.detail;
        out << j.dump() << "\n";
    }
    flush_or_fail(out, path);
}

}  // namespace hifd
