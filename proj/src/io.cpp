#include "linejigsaw/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace linejigsaw {

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

/// Whitespace-tokenized line cursor over one document.
class Reader {
public:
    Reader(const std::string& text, std::string path) : path_(std::move(path)) {
        std::istringstream stream(text);
        std::string line;
        int number = 0;
        while (std::getline(stream, line)) {
            ++number;
            std::istringstream ls(line);
            std::vector<std::string> tokens;
            std::string tok;
            while (ls >> tok) tokens.push_back(tok);
            if (tokens.empty()) continue;
            rows_.push_back(std::move(tokens));
            numbers_.push_back(number);
        }
    }

    const std::string& path() const { return path_; }
    bool done() const { return next_ >= rows_.size(); }

    /// Errors point at the row most recently peeked or taken.
    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(path_, mark_, message);
    }

    const std::vector<std::string>& peek() {
        if (done()) {
            mark_ = numbers_.empty() ? 0 : numbers_.back();
            fail("unexpected end of file");
        }
        mark_ = numbers_[next_];
        return rows_[next_];
    }

    std::vector<std::string> take(const std::string& keyword, size_t token_count = 0) {
        const auto& row = peek();
        if (row[0] != keyword) fail("expected '" + keyword + "', found '" + row[0] + "'");
        if (token_count != 0 && row.size() != token_count) {
            fail("'" + keyword + "' takes " + std::to_string(token_count - 1) + " fields, found " +
                 std::to_string(row.size() - 1));
        }
        ++next_;
        return row;
    }

    void advance() { ++next_; }

    double real(const std::string& tok) const {
        try {
            size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            fail("not a finite real: '" + tok + "'");
        }
    }

    int integer(const std::string& tok) const {
        try {
            size_t used = 0;
            const long v = std::stol(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return static_cast<int>(v);
        } catch (const std::exception&) {
            fail("not an integer: '" + tok + "'");
        }
    }

private:
    std::string path_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<int> numbers_;
    size_t next_ = 0;
    int mark_ = 0;
};

void append_line_row(std::string& out, const LineSegment& l) {
    out += "line " + format_real(l.a.x) + ' ' + format_real(l.a.y) + ' ' + format_real(l.b.x) +
           ' ' + format_real(l.b.y) + ' ' + format_real(l.angle) + ' ' +
           std::to_string(l.category) + '\n';
}

void append_shape(std::string& out, const PieceShape& shape) {
    if (shape.is_square()) {
        out += "shape square " + format_real(std::get<SquareCell>(shape.value).side) + '\n';
        return;
    }
    if (shape.is_polygon()) {
        const Polygon& poly = std::get<Polygon>(shape.value);
        out += "shape polygon " + std::to_string(poly.size());
        for (const Point2& v : poly) out += ' ' + format_real(v.x) + ' ' + format_real(v.y);
        out += '\n';
        return;
    }
    const MaskShape& m = std::get<MaskShape>(shape.value);
    std::vector<int> runs;
    int current = 0;  // runs alternate starting with zeros
    int length = 0;
    for (std::uint8_t bit : m.bits) {
        if ((bit != 0) == (current != 0)) {
            ++length;
        } else {
            runs.push_back(length);
            current = bit;
            length = 1;
        }
    }
    runs.push_back(length);
    out += "shape mask " + format_real(m.origin.x) + ' ' + format_real(m.origin.y) + ' ' +
           format_real(m.cell) + ' ' + std::to_string(m.width) + ' ' + std::to_string(m.height) +
           ' ' + std::to_string(runs.size());
    for (int r : runs) out += ' ' + std::to_string(r);
    out += '\n';
}

}  // namespace

std::string write_descriptor(const Puzzle& puzzle) {
    std::string out = "linejigsaw puzzle v1\n";
    out += "canvas " + format_real(puzzle.canvas_width) + ' ' + format_real(puzzle.canvas_height) +
           '\n';
    out += "grid_step " + format_real(puzzle.grid_step) + '\n';
    out += "rotations " + std::to_string(puzzle.rotation_count) + '\n';
    out += "categories " + std::to_string(puzzle.category_count) + '\n';
    out += "scheme " + cut_scheme_name(puzzle.scheme) + '\n';
    out += "pieces " + std::to_string(puzzle.piece_count()) + '\n';
    for (const Piece& piece : puzzle.pieces) {
        out += "piece " + std::to_string(piece.id) + '\n';
        append_shape(out, piece.shape);
        out += "lines " + std::to_string(piece.lines.size()) + '\n';
        for (const LineSegment& l : piece.lines) append_line_row(out, l);
    }
    if (puzzle.ground_truth) {
        out += "ground_truth\n";
        for (size_t id = 0; id < puzzle.ground_truth->poses.size(); ++id) {
            const Pose& pose = puzzle.ground_truth->poses[id];
            out += "pose " + std::to_string(id) + ' ' + format_real(pose.position.x) + ' ' +
                   format_real(pose.position.y) + ' ' + std::to_string(pose.rotation_index) +
                   '\n';
        }
    }
    out += "end\n";
    return out;
}

void write_descriptor_file(const Puzzle& puzzle, const std::string& path) {
    write_text_file(path, write_descriptor(puzzle));
}

Puzzle read_descriptor(const std::string& text, const std::string& path,
                       bool include_ground_truth) {
    Reader r(text, path);
    {
        const auto head = r.take("linejigsaw", 3);
        if (head[1] != "puzzle" || head[2] != "v1") r.fail("not a puzzle descriptor v1");
    }
    Puzzle puzzle;
    {
        const auto row = r.take("canvas", 3);
        puzzle.canvas_width = r.real(row[1]);
        puzzle.canvas_height = r.real(row[2]);
        if (!(puzzle.canvas_width > 0) || !(puzzle.canvas_height > 0)) {
            r.fail("canvas must be positive");
        }
    }
    puzzle.grid_step = r.real(r.take("grid_step", 2)[1]);
    if (!(puzzle.grid_step > 0)) r.fail("grid_step must be positive");
    puzzle.rotation_count = r.integer(r.take("rotations", 2)[1]);
    if (puzzle.rotation_count < 1) r.fail("rotations must be >= 1");
    puzzle.category_count = r.integer(r.take("categories", 2)[1]);
    if (puzzle.category_count < 1) r.fail("categories must be >= 1");
    {
        const auto row = r.take("scheme", 2);
        const auto scheme = cut_scheme_from_name(row[1]);
        if (!scheme) r.fail("unknown scheme '" + row[1] + "'");
        puzzle.scheme = *scheme;
    }
    const int n = r.integer(r.take("pieces", 2)[1]);
    if (n < 1) r.fail("pieces must be >= 1");

    for (int id = 0; id < n; ++id) {
        const auto head = r.take("piece", 2);
        if (r.integer(head[1]) != id) r.fail("piece ids must run 0.." + std::to_string(n - 1));
        Piece piece;
        piece.id = id;
        {
            const auto& row = r.peek();
            if (row[0] != "shape" || row.size() < 2) r.fail("expected shape row");
            if (row[1] == "square") {
                if (row.size() != 3) r.fail("shape square takes 1 field");
                const double side = r.real(row[2]);
                if (!(side > 0)) r.fail("square side must be positive");
                piece.shape = PieceShape(SquareCell{side});
            } else if (row[1] == "polygon") {
                if (row.size() < 3) r.fail("shape polygon needs a vertex count");
                const int k = r.integer(row[2]);
                if (k < 3) r.fail("polygon needs >= 3 vertices");
                if (row.size() != static_cast<size_t>(3 + 2 * k)) {
                    r.fail("polygon expects " + std::to_string(2 * k) + " coordinates");
                }
                Polygon poly;
                for (int v = 0; v < k; ++v) {
                    poly.push_back({r.real(row[3 + 2 * v]), r.real(row[4 + 2 * v])});
                }
                piece.shape = PieceShape(std::move(poly));
            } else if (row[1] == "mask") {
                if (row.size() < 8) r.fail("shape mask needs origin, cell, size and runs");
                MaskShape m;
                m.origin = {r.real(row[2]), r.real(row[3])};
                m.cell = r.real(row[4]);
                m.width = r.integer(row[5]);
                m.height = r.integer(row[6]);
                if (!(m.cell > 0) || m.width < 1 || m.height < 1) r.fail("bad mask geometry");
                const int nruns = r.integer(row[7]);
                if (row.size() != static_cast<size_t>(8 + nruns)) {
                    r.fail("mask expects " + std::to_string(nruns) + " run lengths");
                }
                m.bits.reserve(static_cast<size_t>(m.width) * m.height);
                int bit = 0;
                for (int k = 0; k < nruns; ++k) {
                    const int len = r.integer(row[8 + k]);
                    if (len < 0) r.fail("negative run length");
                    m.bits.insert(m.bits.end(), len, static_cast<std::uint8_t>(bit));
                    bit = 1 - bit;
                }
                if (m.bits.size() != static_cast<size_t>(m.width) * m.height) {
                    r.fail("mask runs do not cover width*height cells");
                }
                piece.shape = PieceShape(std::move(m));
            } else {
                r.fail("unknown shape kind '" + row[1] + "'");
            }
            r.advance();
        }
        const int m = r.integer(r.take("lines", 2)[1]);
        if (m < 0) r.fail("negative line count");
        for (int k = 0; k < m; ++k) {
            const auto row = r.take("line", 7);
            const Point2 a = {r.real(row[1]), r.real(row[2])};
            const Point2 b = {r.real(row[3]), r.real(row[4])};
            const double angle = r.real(row[5]);
            const int category = r.integer(row[6]);
            if (category < 0 || category >= puzzle.category_count) {
                r.fail("category out of range");
            }
            LineSegment seg;
            try {
                seg = LineSegment::from_endpoints(a, b, category);
            } catch (const std::invalid_argument& e) {
                r.fail(e.what());
            }
            if (orientation_difference(seg.angle, angle) > 1e-3) {
                r.fail("stored angle disagrees with endpoints");
            }
            seg.angle = wrap_orientation(angle);
            piece.lines.push_back(seg);
        }
        puzzle.pieces.push_back(std::move(piece));
    }

    if (!r.done() && r.peek()[0] == "ground_truth") {
        r.take("ground_truth", 1);
        if (include_ground_truth) {
            puzzle.ground_truth.emplace();
            puzzle.ground_truth->poses.resize(n);
            std::vector<bool> seen(n, false);
            for (int k = 0; k < n; ++k) {
                const auto row = r.take("pose", 5);
                const int id = r.integer(row[1]);
                if (id < 0 || id >= n || seen[id]) r.fail("bad or duplicate pose id");
                seen[id] = true;
                const int rot = r.integer(row[4]);
                if (rot < 0 || rot >= puzzle.rotation_count) r.fail("rotation out of range");
                puzzle.ground_truth->poses[id] = {{r.real(row[2]), r.real(row[3])}, rot};
            }
        } else {
            while (!r.done() && r.peek()[0] == "pose") r.advance();
        }
    }
    r.take("end", 1);
    return puzzle;
}

Puzzle read_descriptor_file(const std::string& path, bool include_ground_truth) {
    return read_descriptor(read_text_file(path), path, include_ground_truth);
}

// ---------------------------------------------------------------------------
// Placement
// ---------------------------------------------------------------------------

std::string write_placement(const Placement& placement, int rotation_count, double grid_step) {
    std::string out = "linejigsaw placement v1\n";
    out += "rotations " + std::to_string(rotation_count) + '\n';
    out += "grid_step " + format_real(grid_step) + '\n';
    out += "pieces " + std::to_string(placement.poses.size()) + '\n';
    for (size_t id = 0; id < placement.poses.size(); ++id) {
        if (!placement.poses[id]) continue;
        const Pose& pose = *placement.poses[id];
        out += "pose " + std::to_string(id) + ' ' + format_real(pose.position.x) + ' ' +
               format_real(pose.position.y) + ' ' + std::to_string(pose.rotation_index) + '\n';
    }
    for (int id : placement.unplaced) out += "unplaced " + std::to_string(id) + '\n';
    out += "conflicts " + std::to_string(placement.conflicts_resolved) + '\n';
    out += "end\n";
    return out;
}

void write_placement_file(const Placement& placement, int rotation_count, double grid_step,
                          const std::string& path) {
    write_text_file(path, write_placement(placement, rotation_count, grid_step));
}

PlacementFile read_placement(const std::string& text, const std::string& path) {
    Reader r(text, path);
    {
        const auto head = r.take("linejigsaw", 3);
        if (head[1] != "placement" || head[2] != "v1") r.fail("not a placement v1");
    }
    PlacementFile pf;
    pf.rotation_count = r.integer(r.take("rotations", 2)[1]);
    if (pf.rotation_count < 1) r.fail("rotations must be >= 1");
    pf.grid_step = r.real(r.take("grid_step", 2)[1]);
    const int n = r.integer(r.take("pieces", 2)[1]);
    if (n < 0) r.fail("negative piece count");
    pf.placement.poses.resize(n);
    std::vector<bool> seen(n, false);
    auto claim = [&](int id) {
        if (id < 0 || id >= n || seen[id]) r.fail("bad or duplicate piece id");
        seen[id] = true;
    };
    while (!r.done() && (r.peek()[0] == "pose" || r.peek()[0] == "unplaced")) {
        if (r.peek()[0] == "pose") {
            const auto row = r.take("pose", 5);
            const int id = r.integer(row[1]);
            claim(id);
            const int rot = r.integer(row[4]);
            if (rot < 0 || rot >= pf.rotation_count) r.fail("rotation out of range");
            pf.placement.poses[id] = Pose{{r.real(row[2]), r.real(row[3])}, rot};
        } else {
            const auto row = r.take("unplaced", 2);
            const int id = r.integer(row[1]);
            claim(id);
            pf.placement.unplaced.push_back(id);
        }
    }
    for (int id = 0; id < n; ++id) {
        if (!seen[id]) r.fail("piece " + std::to_string(id) + " missing from placement");
    }
    pf.placement.conflicts_resolved = r.integer(r.take("conflicts", 2)[1]);
    r.take("end", 1);
    return pf;
}

PlacementFile read_placement_file(const std::string& path) {
    return read_placement(read_text_file(path), path);
}

// ---------------------------------------------------------------------------
// Solve trace
// ---------------------------------------------------------------------------

std::string write_trace(const SolveReport& report) {
    std::string out = "linejigsaw trace v1\n";
    out += "iterations " + std::to_string(report.payoff_trajectory.size()) + '\n';
    for (size_t t = 0; t < report.payoff_trajectory.size(); ++t) {
        out += "iter " + std::to_string(t + 1) + ' ' + format_real(report.payoff_trajectory[t]) +
               ' ' + format_real(report.change_trajectory[t]) + '\n';
    }
    out += "residual " + format_real(report.nash_residual) + '\n';
    out += "converged " + std::string(report.converged ? "1" : "0") + '\n';
    out += "end\n";
    return out;
}

void write_trace_file(const SolveReport& report, const std::string& path) {
    write_text_file(path, write_trace(report));
}

TraceFile read_trace(const std::string& text, const std::string& path) {
    Reader r(text, path);
    {
        const auto head = r.take("linejigsaw", 3);
        if (head[1] != "trace" || head[2] != "v1") r.fail("not a trace v1");
    }
    TraceFile tf;
    const int k = r.integer(r.take("iterations", 2)[1]);
    for (int t = 1; t <= k; ++t) {
        const auto row = r.take("iter", 4);
        if (r.integer(row[1]) != t) r.fail("iterations out of order");
        tf.payoff_trajectory.push_back(r.real(row[2]));
        tf.change_trajectory.push_back(r.real(row[3]));
    }
    tf.residual = r.real(r.take("residual", 2)[1]);
    tf.converged = r.integer(r.take("converged", 2)[1]) != 0;
    r.take("end", 1);
    return tf;
}

TraceFile read_trace_file(const std::string& path) {
    return read_trace(read_text_file(path), path);
}

// ---------------------------------------------------------------------------
// Metric records
// ---------------------------------------------------------------------------

std::string write_metrics(const std::vector<MetricRecord>& records) {
    std::string out = "linejigsaw metrics v1\n";
    out += "records " + std::to_string(records.size()) + '\n';
    double sum_d = 0.0;
    double sum_n = 0.0;
    int with_n = 0;
    for (const MetricRecord& rec : records) {
        out += "record " + rec.id + " n " + std::to_string(rec.piece_count) + " D " +
               format_real(rec.report.direct) + " N " +
               (rec.report.neighbors ? format_real(*rec.report.neighbors) : std::string("-")) +
               " tol " + format_real(rec.report.translation_tolerance) + " rot_tol " +
               std::to_string(rec.report.rotation_tolerance_steps) + '\n';
        sum_d += rec.report.direct;
        if (rec.report.neighbors) {
            sum_n += *rec.report.neighbors;
            ++with_n;
        }
    }
    out += "aggregate count " + std::to_string(records.size()) + " mean_D " +
           (records.empty() ? std::string("-") : format_real(sum_d / records.size())) +
           " mean_N " + (with_n ? format_real(sum_n / with_n) : std::string("-")) + '\n';
    out += "end\n";
    return out;
}

void write_metrics_file(const std::vector<MetricRecord>& records, const std::string& path) {
    write_text_file(path, write_metrics(records));
}

std::vector<MetricRecord> read_metrics(const std::string& text, const std::string& path) {
    Reader r(text, path);
    {
        const auto head = r.take("linejigsaw", 3);
        if (head[1] != "metrics" || head[2] != "v1") r.fail("not a metrics file v1");
    }
    const int k = r.integer(r.take("records", 2)[1]);
    std::vector<MetricRecord> records;
    for (int i = 0; i < k; ++i) {
        const auto row = r.take("record", 12);
        if (row[2] != "n" || row[4] != "D" || row[6] != "N" || row[8] != "tol" ||
            row[10] != "rot_tol") {
            r.fail("malformed record");
        }
        MetricRecord rec;
        rec.id = row[1];
        rec.piece_count = r.integer(row[3]);
        rec.report.direct = r.real(row[5]);
        if (row[7] != "-") rec.report.neighbors = r.real(row[7]);
        rec.report.translation_tolerance = r.real(row[9]);
        rec.report.rotation_tolerance_steps = r.integer(row[11]);
        records.push_back(std::move(rec));
    }
    r.take("aggregate");
    r.take("end", 1);
    return records;
}

std::vector<MetricRecord> read_metrics_file(const std::string& path) {
    return read_metrics(read_text_file(path), path);
}

// ---------------------------------------------------------------------------
// Polyline ingestion
// ---------------------------------------------------------------------------

LineSet read_polylines(const std::string& text, const std::string& path, double canvas_width,
                       double canvas_height) {
    std::istringstream stream(text);
    std::string raw;
    int number = 0;
    struct RawSegment {
        Point2 a, b;
        int category;
    };
    std::vector<RawSegment> segments;
    int max_category = -1;
    Point2 lo = {0, 0};
    Point2 hi = {0, 0};
    bool any_point = false;
    while (std::getline(stream, raw)) {
        ++number;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::vector<std::string> tokens;
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
        if (tokens.empty()) continue;
        auto fail = [&](const std::string& message) -> void {
            throw ParseError(path, number, message);
        };
        if (tokens.size() < 5 || (tokens.size() - 1) % 2 != 0) {
            fail("expected '<category> x1 y1 x2 y2 ...' with at least two points");
        }
        int category;
        try {
            size_t used = 0;
            category = std::stoi(tokens[0], &used);
            if (used != tokens[0].size()) throw std::invalid_argument(tokens[0]);
        } catch (const std::exception&) {
            fail("not an integer category: '" + tokens[0] + "'");
        }
        if (category < 0) fail("negative category");
        max_category = std::max(max_category, category);
        std::vector<Point2> points;
        for (size_t i = 1; i + 1 < tokens.size(); i += 2) {
            double x, y;
            try {
                size_t used = 0;
                x = std::stod(tokens[i], &used);
                if (used != tokens[i].size() || !std::isfinite(x)) {
                    throw std::invalid_argument(tokens[i]);
                }
                used = 0;
                y = std::stod(tokens[i + 1], &used);
                if (used != tokens[i + 1].size() || !std::isfinite(y)) {
                    throw std::invalid_argument(tokens[i + 1]);
                }
            } catch (const std::exception&) {
                fail("not a finite coordinate pair: '" + tokens[i] + " " + tokens[i + 1] + "'");
            }
            points.push_back({x, y});
        }
        for (size_t i = 0; i + 1 < points.size(); ++i) {
            if (distance(points[i], points[i + 1]) < 1e-9) {
                fail("degenerate segment: consecutive duplicate points");
            }
            segments.push_back({points[i], points[i + 1], category});
        }
        for (const Point2& p : points) {
            if (!any_point) {
                lo = hi = p;
                any_point = true;
            } else {
                lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
                hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
            }
        }
    }
    if (segments.empty()) throw ParseError(path, number, "no polylines in file");

    LineSet ls;
    ls.category_count = max_category + 1;
    Point2 shift = {0, 0};
    if (canvas_width > 0 && canvas_height > 0) {
        ls.canvas_width = canvas_width;
        ls.canvas_height = canvas_height;
    } else {
        shift = {-lo.x, -lo.y};
        ls.canvas_width = hi.x - lo.x;
        ls.canvas_height = hi.y - lo.y;
        if (!(ls.canvas_width > 0) || !(ls.canvas_height > 0)) {
            throw ParseError(path, number, "polylines span a zero-area canvas");
        }
    }
    for (const RawSegment& seg : segments) {
        Point2 a = seg.a + shift;
        Point2 b = seg.b + shift;
        // Clip to the canvas rectangle.
        const Point2 dir = b - a;
        double t0 = 0.0, t1 = 1.0;
        const double d[2] = {dir.x, dir.y};
        const double p[2] = {a.x, a.y};
        const double hi_c[2] = {ls.canvas_width, ls.canvas_height};
        bool keep = true;
        for (int axis = 0; axis < 2 && keep; ++axis) {
            if (d[axis] == 0.0) {
                keep = p[axis] >= 0 && p[axis] <= hi_c[axis];
                continue;
            }
            double ta = (0 - p[axis]) / d[axis];
            double tb = (hi_c[axis] - p[axis]) / d[axis];
            if (ta > tb) std::swap(ta, tb);
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
            keep = t0 <= t1;
        }
        if (!keep || (t1 - t0) * norm(dir) < 1e-9) continue;
        ls.lines.push_back(
            LineSegment::from_endpoints(a + dir * t0, a + dir * t1, seg.category));
    }
    if (ls.lines.empty()) throw ParseError(path, number, "all polylines fall outside the canvas");
    return ls;
}

LineSet read_polylines_file(const std::string& path, double canvas_width, double canvas_height) {
    return read_polylines(read_text_file(path), path, canvas_width, canvas_height);
}

}  // namespace linejigsaw
