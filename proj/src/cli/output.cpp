#include "levyexit/cli/output.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include <json.hpp>

#include "levyexit/errors.hpp"

namespace levyexit::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

void parse_entry(const std::string& body, Entries& into) {
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ValidationError("result: malformed metadata line '" + body + "'");
    into.emplace_back(body.substr(0, eq), body.substr(eq + 1));
}

}  // namespace

std::string to_csv(const ResultTable& t) {
    std::string s = "# ";
    s += kToolVersion;
    s += '\n';
    for (const auto& [k, v] : t.config) s += "# config: " + k + "=" + v + "\n";
    for (const auto& [k, v] : t.diagnostics) s += "# diag: " + k + "=" + v + "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) s += ',';
        s += t.columns[i];
    }
    s += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) s += ',';
            s += format_double(row[i]);
        }
        s += '\n';
    }
    return s;
}

std::string to_json(const ResultTable& t) {
    nlohmann::ordered_json j;
    j["tool"] = kToolVersion;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.config) cfg[k] = v;
    nlohmann::ordered_json diag = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.diagnostics) diag[k] = v;
    j["metadata"]["config"] = cfg;
    j["metadata"]["diagnostics"] = diag;
    j["columns"] = t.columns;
    j["data"] = t.rows;
    return j.dump(1) + "\n";
}

std::string render(const ResultTable& t, OutputFormat f) {
    return f == OutputFormat::Csv ? to_csv(t) : to_json(t);
}

ResultTable parse_result(const std::string& text) {
    ResultTable t;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        const auto j = nlohmann::ordered_json::parse(text);
        for (const auto& [k, v] : j.at("metadata").at("config").items()) t.config.emplace_back(k, v.get<std::string>());
        for (const auto& [k, v] : j.at("metadata").at("diagnostics").items())
            t.diagnostics.emplace_back(k, v.get<std::string>());
        t.columns = j.at("columns").get<std::vector<std::string>>();
        t.rows = j.at("data").get<std::vector<std::vector<double>>>();
        return t;
    }
    std::stringstream in(text);
    bool header_done = false;
    for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        if (line.rfind("# config: ", 0) == 0) {
            parse_entry(line.substr(10), t.config);
        } else if (line.rfind("# diag: ", 0) == 0) {
            parse_entry(line.substr(8), t.diagnostics);
        } else if (line[0] == '#') {
            continue;
        } else if (!header_done) {
            t.columns = split(line, ',');
            header_done = true;
        } else {
            std::vector<double> row;
            for (const auto& cell : split(line, ',')) row.push_back(parse_double("data", cell));
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

ResultTable read_result(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("result: cannot read '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_result(buf.str());
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    static std::atomic<unsigned> counter{0};
    const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const auto tmp = dir / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()) + "." +
                            std::to_string(counter.fetch_add(1)));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
    }
}

}  // namespace levyexit::cli
