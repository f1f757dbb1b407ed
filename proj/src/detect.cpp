#include "focal/detect.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>

#include "focal/errors.hpp"

namespace focal {

namespace {

// Runs along one row (horizontal) or column (vertical) of the mask.
struct Run {
    int position; // row or column index
    int start;
    int end;
};

template <typename Visit>
void for_each_line(const BinaryMask& m, Orientation orientation, Visit&& visit) {
    const int lines = orientation == Orientation::horizontal ? m.height : m.width;
    const int along = orientation == Orientation::horizontal ? m.width : m.height;
    for (int pos = 0; pos < lines; ++pos) {
        auto get = [&](int i) {
            return orientation == Orientation::horizontal ? m.get(i, pos) : m.get(pos, i);
        };
        visit(pos, along, get);
    }
}

std::vector<Run> foreground_runs(const BinaryMask& m, Orientation orientation, int min_length) {
    std::vector<Run> runs;
    for_each_line(m, orientation, [&](int pos, int along, auto get) {
        int start = -1;
        for (int i = 0; i <= along; ++i) {
            bool fg = i < along && get(i);
            if (fg && start < 0) start = i;
            if (!fg && start >= 0) {
                if (i - start >= min_length) runs.push_back({pos, start, i - 1});
                start = -1;
            }
        }
    });
    return runs;
}

} // namespace

BinaryMask morph_open_lines(const BinaryMask& m, Orientation orientation, int kernel_length) {
    if (kernel_length < 2) throw Error("kernel_length must be >= 2");
    // Opening with a segment kernel keeps exactly the runs of length >= k,
    // at full length; computed run-wise instead of erode+dilate passes.
    BinaryMask out(m.width, m.height);
    for (const Run& run : foreground_runs(m, orientation, kernel_length)) {
        for (int i = run.start; i <= run.end; ++i) {
            if (orientation == Orientation::horizontal) {
                out.set(i, run.position, true);
            } else {
                out.set(run.position, i, true);
            }
        }
    }
    return out;
}

std::vector<LineSegment> extract_line_segments(const BinaryMask& m, Orientation orientation,
                                               int min_length, int merge_gap) {
    if (min_length < 2) throw Error("min_length must be >= 2");
    std::vector<Run> runs = foreground_runs(m, orientation, min_length);

    // Cluster runs whose positions are within merge_gap and whose spans
    // overlap; anti-aliased rules land on 2-3 adjacent lines.
    std::vector<int> parent(runs.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (size_t i = 0; i < runs.size(); ++i) {
        for (size_t j = i + 1; j < runs.size(); ++j) {
            if (std::abs(runs[i].position - runs[j].position) > merge_gap) continue;
            if (runs[i].start > runs[j].end || runs[j].start > runs[i].end) continue;
            parent[find(int(j))] = find(int(i));
        }
    }

    struct Cluster {
        long long position_sum = 0;
        int count = 0;
        int start = std::numeric_limits<int>::max();
        int end = std::numeric_limits<int>::min();
    };
    std::map<int, Cluster> clusters;
    for (size_t i = 0; i < runs.size(); ++i) {
        Cluster& c = clusters[find(int(i))];
        c.position_sum += runs[i].position;
        c.count += 1;
        c.start = std::min(c.start, runs[i].start);
        c.end = std::max(c.end, runs[i].end);
    }

    std::vector<LineSegment> segments;
    segments.reserve(clusters.size());
    for (const auto& [root, c] : clusters) {
        int centroid = int((c.position_sum + c.count / 2) / c.count);
        segments.push_back({orientation, centroid, c.start, c.end});
    }
    std::sort(segments.begin(), segments.end(), [](const LineSegment& a, const LineSegment& b) {
        if (a.position != b.position) return a.position < b.position;
        return a.start < b.start;
    });
    return segments;
}

std::vector<Contour> find_contours(const BinaryMask& m) {
    std::vector<Contour> contours;
    std::vector<uint8_t> seen(m.bits.size(), 0);
    std::deque<std::pair<int, int>> frontier;

    for (int sy = 0; sy < m.height; ++sy) {
        for (int sx = 0; sx < m.width; ++sx) {
            size_t si = size_t(sy) * m.width + sx;
            if (!m.bits[si] || seen[si]) continue;

            Contour c;
            c.bbox = {sx, sy, sx, sy};
            seen[si] = 1;
            frontier.push_back({sx, sy});
            while (!frontier.empty()) {
                auto [x, y] = frontier.front();
                frontier.pop_front();
                c.area += 1;
                c.bbox.x1 = std::min(c.bbox.x1, x);
                c.bbox.y1 = std::min(c.bbox.y1, y);
                c.bbox.x2 = std::max(c.bbox.x2, x);
                c.bbox.y2 = std::max(c.bbox.y2, y);

                bool boundary = false;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        int nx = x + dx, ny = y + dy;
                        bool inside = nx >= 0 && nx < m.width && ny >= 0 && ny < m.height;
                        if (!inside) {
                            if (dx == 0 || dy == 0) boundary = true;
                            continue;
                        }
                        if (!m.get(nx, ny)) {
                            if (dx == 0 || dy == 0) boundary = true;
                            continue;
                        }
                        size_t ni = size_t(ny) * m.width + nx;
                        if (!seen[ni]) {
                            seen[ni] = 1;
                            frontier.push_back({nx, ny});
                        }
                    }
                }
                if (boundary) c.perimeter_length += 1;
            }
            contours.push_back(c);
        }
    }

    std::sort(contours.begin(), contours.end(), [](const Contour& a, const Contour& b) {
        if (a.perimeter_length != b.perimeter_length) return a.perimeter_length > b.perimeter_length;
        if (a.bbox.y1 != b.bbox.y1) return a.bbox.y1 < b.bbox.y1;
        return a.bbox.x1 < b.bbox.x1;
    });
    return contours;
}

} // namespace focal
