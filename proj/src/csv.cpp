#include "adaptopt/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "strcat.hpp"

namespace adaptopt {

namespace {

constexpr std::array<const char*, 9> monitor_columns = {
    "monitor_t", "V", "V1", "diameter", "team_value_at_mean", "grad_sum_norm", "max_gain", "max_speed",
    "interaction_dissipation"};

void append_number(std::string& out, double value) {
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    out.append(buf.data(), end);
}

double parse_number(std::string_view field, std::size_t line) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw IoError(cat("line ", line, ": cannot parse number \"", field, "\""));
    }
    return value;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

std::vector<std::string> csv_columns(std::size_t n, std::size_t m, Mode mode) {
    std::vector<std::string> cols{"t"};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < m; ++k) cols.push_back(cat("x", i, "_", k));
    if (mode == Mode::Double) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < m; ++k) cols.push_back(cat("v", i, "_", k));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) cols.push_back(cat("q", i, "_", j));
    for (const char* c : monitor_columns) cols.emplace_back(c);
    return cols;
}

std::string to_csv(const RunRecord& record) {
    if (record.monitors.size() != record.size()) throw IoError("record must be annotated before writing CSV");
    const std::size_t n = record.agents();
    const std::size_t m = record.dimension();
    std::string out;
    const auto cols = csv_columns(n, m, record.mode);
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (c) out += ',';
        out += cols[c];
    }
    out += '\n';
    for (std::size_t s = 0; s < record.size(); ++s) {
        append_number(out, record.times[s]);
        auto put = [&](double v) {
            out += ',';
            append_number(out, v);
        };
        const auto& x = record.x[s];
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            for (Eigen::Index k = 0; k < x.cols(); ++k) put(x(i, k));
        if (record.mode == Mode::Double) {
            const auto& v = record.v[s];
            for (Eigen::Index i = 0; i < v.rows(); ++i)
                for (Eigen::Index k = 0; k < v.cols(); ++k) put(v(i, k));
        }
        const auto& q = record.q[s];
        for (Eigen::Index i = 0; i < q.rows(); ++i)
            for (Eigen::Index j = i + 1; j < q.cols(); ++j) put(q(i, j));
        const auto& mon = record.monitors[s];
        for (double v : {mon.t, mon.V, mon.V1, mon.diameter, mon.team_value_at_mean, mon.grad_sum_norm, mon.max_gain,
                         mon.max_speed, mon.interaction_dissipation}) {
            put(v);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const RunRecord& record, const std::filesystem::path& path) {
    const std::string text = to_csv(record);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError(cat("cannot open ", path.string(), " for writing"));
    f << text;
    if (!f) throw IoError(cat("write to ", path.string(), " failed"));
}

RunRecord parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty CSV");
    const auto header = split(line);

    // Infer shape from the header: count x, v and q columns.
    std::size_t xs = 0, vs = 0, qs = 0, m = 0;
    for (auto h : header) {
        if (h.starts_with('x')) {
            ++xs;
            if (h.starts_with("x0_")) ++m;
        } else if (h.starts_with('v')) {
            ++vs;
        } else if (h.starts_with('q')) {
            ++qs;
        }
    }
    if (m == 0) throw IoError("CSV header has no position columns");
    const std::size_t n = xs / m;
    const Mode mode = vs > 0 ? Mode::Double : Mode::Single;
    const auto expected = csv_columns(n, m, mode);
    if (header.size() != expected.size() || qs != n * (n - 1) / 2) throw IoError("CSV header does not match any record layout");
    for (std::size_t c = 0; c < expected.size(); ++c) {
        if (header[c] != expected[c]) throw IoError(cat("unexpected column \"", header[c], "\", expected \"", expected[c], "\""));
    }

    RunRecord rec;
    rec.mode = mode;
    std::size_t line_no = 1;
    const auto rn = static_cast<Eigen::Index>(n);
    const auto rm = static_cast<Eigen::Index>(m);
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != expected.size()) {
            throw IoError(cat("line ", line_no, ": ", fields.size(), " fields, expected ", expected.size()));
        }
        std::size_t c = 0;
        auto next = [&] { return parse_number(fields[c++], line_no); };
        rec.times.push_back(next());
        Eigen::MatrixXd x(rn, rm);
        for (Eigen::Index i = 0; i < rn; ++i)
            for (Eigen::Index k = 0; k < rm; ++k) x(i, k) = next();
        rec.x.push_back(std::move(x));
        if (mode == Mode::Double) {
            Eigen::MatrixXd v(rn, rm);
            for (Eigen::Index i = 0; i < rn; ++i)
                for (Eigen::Index k = 0; k < rm; ++k) v(i, k) = next();
            rec.v.push_back(std::move(v));
        }
        Eigen::MatrixXd q = Eigen::MatrixXd::Zero(rn, rn);
        for (Eigen::Index i = 0; i < rn; ++i)
            for (Eigen::Index j = i + 1; j < rn; ++j) q(i, j) = q(j, i) = next();
        rec.q.push_back(std::move(q));
        MonitorSample mon;
        for (double* f : {&mon.t, &mon.V, &mon.V1, &mon.diameter, &mon.team_value_at_mean, &mon.grad_sum_norm,
                          &mon.max_gain, &mon.max_speed, &mon.interaction_dissipation}) {
            *f = next();
        }
        rec.monitors.push_back(mon);
    }
    return rec;
}

RunRecord read_csv(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError(cat("cannot open ", path.string()));
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_csv(ss.str());
}

}  // namespace adaptopt
