#include <doctest.h>

#include <functional>
#include <map>
#include <numeric>

#include "focal/detect.hpp"
#include "focal/errors.hpp"
#include "focal/layout.hpp"
#include "focal/mask.hpp"
#include "focal/synth.hpp"
#include "focal/table_parse.hpp"

#include "helpers.hpp"

using namespace focal;

namespace {

// Opening by definition: union of every kernel window fully inside the
// foreground. Independent of the run-based implementation.
BinaryMask opening_oracle(const BinaryMask& m, Orientation o, int k) {
    BinaryMask out(m.width, m.height);
    auto fg = [&](int x, int y) { return m.get(x, y); };
    if (o == Orientation::horizontal) {
        for (int y = 0; y < m.height; ++y) {
            for (int x0 = 0; x0 + k <= m.width; ++x0) {
                bool fits = true;
                for (int i = 0; i < k && fits; ++i) fits = fg(x0 + i, y);
                if (fits)
                    for (int i = 0; i < k; ++i) out.set(x0 + i, y, true);
            }
        }
    } else {
        for (int x = 0; x < m.width; ++x) {
            for (int y0 = 0; y0 + k <= m.height; ++y0) {
                bool fits = true;
                for (int i = 0; i < k && fits; ++i) fits = fg(x, y0 + i);
                if (fits)
                    for (int i = 0; i < k; ++i) out.set(x, y0 + i, true);
            }
        }
    }
    return out;
}

// Component labeling by exhaustive pairwise merging (union-find over all
// 8-adjacent pixel pairs); a different algorithm from the BFS in the library.
std::vector<long long> component_areas_oracle(const BinaryMask& m) {
    std::vector<int> parent(m.bits.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            if (!m.get(x, y)) continue;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    int nx = x + dx, ny = y + dy;
                    if (nx < 0 || ny < 0 || nx >= m.width || ny >= m.height) continue;
                    if (!m.get(nx, ny)) continue;
                    parent[find(ny * m.width + nx)] = find(y * m.width + x);
                }
            }
        }
    }
    std::map<int, long long> areas;
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x)
            if (m.get(x, y)) areas[find(y * m.width + x)] += 1;
    std::vector<long long> out;
    for (auto& [root, area] : areas) out.push_back(area);
    std::sort(out.begin(), out.end());
    return out;
}

BinaryMask random_mask(testutil::Rng& rng, int w, int h, double density) {
    BinaryMask m(w, h);
    for (auto& bit : m.bits) bit = rng.chance(density) ? 1 : 0;
    return m;
}

} // namespace

TEST_CASE("binarize thresholds on rounded 601 luminance") {
    Raster white(2, 1, kWhite);
    CHECK(binarize(white).foreground_count() == 0);

    Raster black(2, 1, kBlack);
    CHECK(binarize(black).foreground_count() == 2);

    // Gray 127: luminance exactly 127 < 128.
    Raster gray(1, 1, {127, 127, 127, 255});
    CHECK(binarize(gray, 128).get(0, 0));
    CHECK_FALSE(binarize(gray, 127).get(0, 0));
}

TEST_CASE("morph_open_lines keeps only runs of kernel length") {
    BinaryMask m(50, 3);
    for (int x = 5; x < 35; ++x) m.set(x, 0, true);  // 30 px run
    for (int x = 5; x < 15; ++x) m.set(x, 2, true);  // 10 px run

    BinaryMask opened = morph_open_lines(m, Orientation::horizontal, 20);
    int row0 = 0, row2 = 0;
    for (int x = 0; x < 50; ++x) {
        row0 += opened.get(x, 0);
        row2 += opened.get(x, 2);
    }
    CHECK(row0 == 30); // preserved at full length
    CHECK(row2 == 0);  // erased
}

TEST_CASE("opening matches the window-fit oracle and never adds foreground") {
    testutil::Rng rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        int w = rng.range(4, 64), h = rng.range(4, 64);
        BinaryMask m = random_mask(rng, w, h, 0.55);
        Orientation o = rng.chance(0.5) ? Orientation::horizontal : Orientation::vertical;
        int k = rng.range(2, 6);
        BinaryMask opened = morph_open_lines(m, o, k);
        CHECK(opened == opening_oracle(m, o, k));
        for (size_t i = 0; i < m.bits.size(); ++i) {
            REQUIRE(opened.bits[i] <= m.bits[i]);
        }
    }
}

TEST_CASE("extract_line_segments merges parallel rules") {
    SUBCASE("empty mask") {
        BinaryMask m(20, 20);
        CHECK(extract_line_segments(m, Orientation::horizontal, 5).empty());
    }
    SUBCASE("two rules 1 px apart merge at the centroid") {
        BinaryMask m(30, 10);
        for (int x = 2; x < 28; ++x) {
            m.set(x, 4, true);
            m.set(x, 5, true);
        }
        auto segments = extract_line_segments(m, Orientation::horizontal, 10);
        REQUIRE(segments.size() == 1);
        CHECK(segments[0].position == 5); // round(4.5) up
        CHECK(segments[0].start == 2);
        CHECK(segments[0].end == 27);
    }
    SUBCASE("rules farther than merge_gap stay apart") {
        BinaryMask m(30, 10);
        for (int x = 0; x < 30; ++x) {
            m.set(x, 2, true);
            m.set(x, 7, true);
        }
        auto segments = extract_line_segments(m, Orientation::horizontal, 10);
        REQUIRE(segments.size() == 2);
        CHECK(segments[0].position == 2);
        CHECK(segments[1].position == 7);
    }
    SUBCASE("non-overlapping runs at the same position are separate segments") {
        BinaryMask m(40, 4);
        for (int x = 0; x < 12; ++x) m.set(x, 1, true);
        for (int x = 25; x < 40; ++x) m.set(x, 1, true);
        auto segments = extract_line_segments(m, Orientation::horizontal, 8);
        CHECK(segments.size() == 2);
    }
}

TEST_CASE("extracted segments land on rendered rule positions") {
    TableSpec spec;
    spec.column_names = {"A", "B", "C"};
    spec.cells = {{"1", "2", "3"}, {"4", "5", "6"}, {"7", "8", "9"}};
    spec.style.cell_padding = 5;
    auto [img, truth] = render_table(spec);
    const TableLayout& gt = truth.layout.table();

    BinaryMask ink = binarize(img);
    int kernel = std::max(10, img.width() / 20);
    BinaryMask lines = morph_open_lines(ink, Orientation::horizontal, kernel);
    auto segments = extract_line_segments(lines, Orientation::horizontal, kernel);

    // One segment per horizontal rule: header top/bottom and every row
    // bottom. Positions must match the renderer's boundaries within the
    // merge tolerance.
    std::vector<int> expected{gt.header_region->y1, gt.header_region->y2};
    for (const NamedRegion& row : gt.rows) expected.push_back(row.region.y2);
    REQUIRE(segments.size() == expected.size());
    for (size_t i = 0; i < expected.size(); ++i) {
        CHECK(std::abs(segments[i].position - expected[i]) <= 2);
    }
}

TEST_CASE("find_contours basics") {
    SUBCASE("single block") {
        BinaryMask m(32, 32);
        for (int y = 5; y < 15; ++y)
            for (int x = 5; x < 15; ++x) m.set(x, y, true);
        auto contours = find_contours(m);
        REQUIRE(contours.size() == 1);
        CHECK(contours[0].bbox == Region{5, 5, 14, 14});
        CHECK(contours[0].area == 100);
    }
    SUBCASE("two disjoint blocks") {
        BinaryMask m(32, 32);
        m.set(2, 2, true);
        for (int y = 20; y < 24; ++y)
            for (int x = 20; x < 24; ++x) m.set(x, y, true);
        CHECK(find_contours(m).size() == 2);
    }
    SUBCASE("nested frames separated by background are distinct") {
        BinaryMask m(20, 20);
        auto frame = [&](int lo, int hi) {
            for (int i = lo; i <= hi; ++i) {
                m.set(i, lo, true);
                m.set(i, hi, true);
                m.set(lo, i, true);
                m.set(hi, i, true);
            }
        };
        frame(1, 18);
        frame(5, 14);
        auto contours = find_contours(m);
        REQUIRE(contours.size() == 2);
        CHECK(contours[0].bbox == Region{1, 1, 18, 18}); // outer has longer perimeter
        CHECK(contours[1].bbox == Region{5, 5, 14, 14});
    }
}

TEST_CASE("contour areas match the union-find oracle and conserve foreground") {
    testutil::Rng rng(9);
    for (int trial = 0; trial < 25; ++trial) {
        int w = rng.range(8, 128), h = rng.range(8, 128);
        BinaryMask m = random_mask(rng, w, h, 0.4);
        auto contours = find_contours(m);

        long long total = 0;
        std::vector<long long> areas;
        for (const Contour& c : contours) {
            total += c.area;
            areas.push_back(c.area);
        }
        CHECK(size_t(total) == m.foreground_count());

        std::sort(areas.begin(), areas.end());
        CHECK(areas == component_areas_oracle(m));
    }
}

TEST_CASE("bar_regions_from_axis splits strips midpoint to midpoint") {
    ChartLayout vbar;
    vbar.kind = ChartKind::vertical_bar;
    vbar.plot_region = {0, 0, 89, 59};
    // Evenly spaced centers at 15, 45, 75.
    vbar.axis_entries = {{"a", {10, 62, 20, 70}}, {"b", {40, 62, 50, 70}}, {"c", {70, 62, 80, 70}}};

    SUBCASE("middle label covers the middle third") {
        auto regions = bar_regions_from_axis(vbar, {"b"});
        REQUIRE(regions.size() == 1);
        CHECK(regions[0] == Region{30, 0, 60, 59});
    }
    SUBCASE("empty labels give empty list") {
        CHECK(bar_regions_from_axis(vbar, {}).empty());
    }
    SUBCASE("order follows input labels") {
        auto regions = bar_regions_from_axis(vbar, {"c", "a"});
        REQUIRE(regions.size() == 2);
        CHECK(regions[0].x1 == 60);
        CHECK(regions[1].x2 == 30);
    }
    SUBCASE("unknown label lists available ones") {
        CHECK_THROWS_AS(bar_regions_from_axis(vbar, {"nope"}), UnknownLabelError);
        try {
            bar_regions_from_axis(vbar, {"nope"});
        } catch (const UnknownLabelError& e) {
            CHECK(e.label == "nope");
            CHECK(e.available == std::vector<std::string>{"a", "b", "c"});
        }
    }
    SUBCASE("horizontal bars transpose") {
        ChartLayout hbar;
        hbar.kind = ChartKind::horizontal_bar;
        hbar.plot_region = {20, 0, 99, 79};
        hbar.axis_entries = {{"UK", {0, 5, 18, 15}},
                             {"US", {0, 25, 18, 35}},
                             {"France", {0, 45, 18, 55}},
                             {"China", {0, 65, 18, 75}}};
        auto regions = bar_regions_from_axis(hbar, {"UK", "US", "France", "China"});
        REQUIRE(regions.size() == 4);
        for (const Region& r : regions) {
            CHECK(r.x1 == 20);
            CHECK(r.x2 == 99); // full plot width strips
        }
        CHECK(regions[0].y1 == 0);
        CHECK(regions[3].y2 == 79);
        // Strips tile the plot without gaps.
        CHECK(regions[1].y1 == regions[0].y2);
    }
}

TEST_CASE("layout JSON round-trips and keeps order") {
    TableLayout t;
    t.table_region = {0, 0, 100, 80};
    t.header_region = Region{0, 0, 100, 20};
    t.columns = {{"Team", {0, 0, 30, 80}}, {"Wins", {30, 0, 100, 80}}};
    t.rows = {{"row_1", {0, 20, 100, 50}}, {"row_2", {0, 50, 100, 80}}};
    StructureLayout layout{t};

    std::string json = layout.to_json();
    CHECK(json.find("\"Team\":{\"x1\":0,\"y1\":0,\"x2\":30,\"y2\":80}") != std::string::npos);
    CHECK(StructureLayout::from_json(json) == layout);

    // Order preserved even when lexicographic order differs.
    CHECK(json.find("Team") < json.find("Wins"));
}

TEST_CASE("target resolution falls back by case then whitespace") {
    TableLayout t;
    t.table_region = {0, 0, 10, 10};
    t.columns = {{"Country Name", {0, 0, 5, 10}}, {"Wins", {5, 0, 10, 10}}};
    t.rows = {{"row_1", {0, 0, 10, 10}}};
    StructureLayout layout{t};

    CHECK(layout.resolve_target(TargetClass::columns, "Wins") == "Wins");
    CHECK(layout.resolve_target(TargetClass::columns, "wins") == "Wins");
    CHECK(layout.resolve_target(TargetClass::columns, " country  name ") == "Country Name");
    CHECK_THROWS_AS(layout.resolve_target(TargetClass::columns, "Losses"), UnknownTargetError);
    CHECK_THROWS_AS(layout.resolve_target(TargetClass::bars_x, "Wins"), TargetClassMismatchError);
}

TEST_CASE("disambiguate_names suffixes ordinals") {
    CHECK(disambiguate_names({"Wins", "Wins", "Team"}) ==
          std::vector<std::string>{"Wins", "Wins#2", "Team"});
}

TEST_CASE("detect_subplot_candidates on a blank image is empty") {
    Raster blank(64, 64, kWhite);
    CHECK(detect_subplot_candidates(blank, 10).empty());
}
