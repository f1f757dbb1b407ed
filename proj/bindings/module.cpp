// Python bindings for the main pipeline operations. Layouts, edit records and
// episodes cross the boundary as their canonical JSON strings; images cross
// as Raster objects with a bytes view.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "focal/agent.hpp"
#include "focal/chat.hpp"
#include "focal/digest.hpp"
#include "focal/edit_tools.hpp"
#include "focal/errors.hpp"
#include "focal/eval.hpp"
#include "focal/raster.hpp"
#include "focal/synth.hpp"
#include "focal/table_parse.hpp"
#include "focal/toolcall.hpp"

namespace py = pybind11;
using namespace focal;

namespace {

Color color_from_tuple(const py::tuple& t) {
    if (t.size() != 3 && t.size() != 4) throw Error("color must be (r, g, b[, a])");
    Color c{t[0].cast<uint8_t>(), t[1].cast<uint8_t>(), t[2].cast<uint8_t>(), 255};
    if (t.size() == 4) c.a = t[3].cast<uint8_t>();
    return c;
}

Region region_from_tuple(const py::tuple& t) {
    if (t.size() != 4) throw Error("region must be (x1, y1, x2, y2)");
    return {t[0].cast<int>(), t[1].cast<int>(), t[2].cast<int>(), t[3].cast<int>()};
}

std::string apply_tool_json(const Raster& r, const std::string& layout_json,
                            const std::string& surface_name,
                            const std::vector<std::string>& targets, Raster& out) {
    StructureLayout layout = StructureLayout::from_json(layout_json);
    auto tool = tool_from_surface(surface_name);
    if (!tool) throw Error("unknown tool " + surface_name);
    auto [edited, record] = apply_tool(r, layout, *tool, targets);
    out = std::move(edited);

    std::string regions = "[";
    for (size_t i = 0; i < record.affected_regions.size(); ++i) {
        regions += (i ? "," : "") + region_to_json(record.affected_regions[i]);
    }
    regions += "]";
    return std::string("{\"tool\":\"") + surface_name + "\",\"affected_regions\":" + regions +
           ",\"input_hash\":\"" + record.input_hash + "\",\"output_hash\":\"" +
           record.output_hash + "\"}";
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "structured-image focus editing toolkit";

    py::register_exception<Error>(m, "FocalError");

    py::class_<Raster>(m, "Raster", py::buffer_protocol())
        .def(py::init([](int w, int h) { return Raster(w, h); }), py::arg("width"),
             py::arg("height"))
        .def(py::init([](int w, int h, py::tuple fill) {
                 return Raster(w, h, color_from_tuple(fill));
             }),
             py::arg("width"), py::arg("height"), py::arg("fill"))
        .def_property_readonly("width", &Raster::width)
        .def_property_readonly("height", &Raster::height)
        .def("at",
             [](const Raster& r, int x, int y) {
                 if (!r.in_bounds(x, y)) throw Error("pixel out of bounds");
                 Color c = r.at(x, y);
                 return py::make_tuple(c.r, c.g, c.b, c.a);
             })
        .def("tobytes",
             [](const Raster& r) {
                 return py::bytes(reinterpret_cast<const char*>(r.bytes().data()),
                                  r.bytes().size());
             })
        .def_static("frombytes",
                    [](int w, int h, py::bytes data) {
                        std::string buf = data;
                        if (buf.size() != size_t(w) * h * 4) {
                            throw Error("expected width*height*4 RGBA bytes");
                        }
                        Raster r(w, h);
                        std::copy(buf.begin(), buf.end(), r.bytes().begin());
                        return r;
                    })
        .def_buffer([](Raster& r) {
            return py::buffer_info(r.bytes().data(), 1, py::format_descriptor<uint8_t>::format(),
                                   3, {size_t(r.height()), size_t(r.width()), size_t(4)},
                                   {size_t(r.width()) * 4, size_t(4), size_t(1)});
        })
        .def("__repr__", [](const Raster& r) {
            return "<Raster " + std::to_string(r.width()) + "x" + std::to_string(r.height()) + ">";
        });

    m.def("load_png", [](py::bytes data) {
        std::string buf = data;
        return load_png(std::span<const uint8_t>(
            reinterpret_cast<const uint8_t*>(buf.data()), buf.size()));
    });
    m.def("save_png", [](const Raster& r) {
        auto bytes = save_png(r);
        return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    });
    m.def("load_png_file", &load_png_file);
    m.def("save_png_file", &save_png_file);
    m.def("pixel_digest", &pixel_digest);

    m.def(
        "fill_opaque",
        [](const Raster& r, py::tuple region, py::tuple color) {
            return fill_opaque(r, region_from_tuple(region), color_from_tuple(color));
        },
        py::arg("raster"), py::arg("region"), py::arg("color"));
    m.def(
        "composite_overlay",
        [](const Raster& r, py::tuple region, py::tuple color) {
            return composite_overlay(r, region_from_tuple(region), color_from_tuple(color));
        },
        py::arg("raster"), py::arg("region"), py::arg("color"));
    m.def(
        "draw_rect_outline",
        [](const Raster& r, py::tuple region, py::tuple color, int thickness) {
            return draw_rect_outline(r, region_from_tuple(region), color_from_tuple(color),
                                     thickness);
        },
        py::arg("raster"), py::arg("region"), py::arg("color"), py::arg("thickness") = 3);

    m.def(
        "detect_table_layout",
        [](const Raster& r, const std::vector<std::string>& columns, int rows) {
            return StructureLayout(infer_table_layout(r, columns, rows)).to_json();
        },
        py::arg("raster"), py::arg("columns"), py::arg("row_count"),
        "Recover the table grid; returns the canonical layout JSON.");
    m.def(
        "detect_subplot_layout",
        [](const Raster& r, int k) { return StructureLayout(subplot_layout(r, k)).to_json(); },
        py::arg("raster"), py::arg("k") = 10);

    m.def("tool_registry", []() {
        std::vector<py::tuple> out;
        for (const ToolInfo& info : tool_registry()) {
            out.push_back(py::make_tuple(info.surface_name, to_string(info.target_class),
                                         info.doc));
        }
        return out;
    });
    m.def(
        "apply_tool",
        [](const Raster& r, const std::string& layout_json, const std::string& tool,
           const std::vector<std::string>& targets) {
            Raster out(1, 1);
            std::string record = apply_tool_json(r, layout_json, tool, targets, out);
            return py::make_tuple(std::move(out), record);
        },
        py::arg("raster"), py::arg("layout_json"), py::arg("tool"), py::arg("targets"),
        "Apply one editing tool; returns (edited_raster, edit_record_json).");

    m.def("extract_calls", [](const std::string& text) {
        std::vector<py::tuple> out;
        for (const ToolCall& call : extract_calls(text).calls) {
            out.push_back(py::make_tuple(tool_info(call.tool).surface_name, call.targets));
        }
        return out;
    });
    m.def("has_answer_marker",
          [](const std::string& text) { return has_answer_marker(text); });
    m.def("extract_final_answer", [](const std::string& text) -> py::object {
        auto answer = extract_final_answer(text);
        if (!answer) return py::none();
        return py::str(*answer);
    });

    m.def(
        "render_table",
        [](const std::vector<std::string>& columns,
           const std::vector<std::vector<std::string>>& cells, bool bordered) {
            TableSpec spec;
            spec.column_names = columns;
            spec.cells = cells;
            spec.style.border = bordered;
            spec.style.cell_padding = 5;
            auto [img, truth] = render_table(spec);
            return py::make_tuple(std::move(img), truth.layout.to_json());
        },
        py::arg("columns"), py::arg("cells"), py::arg("bordered") = true,
        "Render a synthetic table; returns (raster, ground_truth_layout_json).");
    m.def(
        "render_random_table",
        [](uint64_t seed, bool bordered) {
            auto [img, truth] = render_table(random_table_spec(seed, bordered));
            return py::make_tuple(std::move(img), truth.layout.to_json());
        },
        py::arg("seed"), py::arg("bordered") = true);

    m.def(
        "score",
        [](const std::string& prediction, const std::string& gold, const std::string& mode,
           double tolerance) {
            ScoreConfig config;
            config.tolerance = tolerance;
            if (mode == "exact") config.mode = ScoreMode::exact_normalized;
            else if (mode == "relaxed") config.mode = ScoreMode::numeric_relaxed;
            else throw Error("mode must be exact or relaxed");
            return score(prediction, gold, config);
        },
        py::arg("prediction"), py::arg("gold"), py::arg("mode") = "exact",
        py::arg("tolerance") = 0.05);

    m.def(
        "run_replay",
        [](const Raster& image, const std::string& question, const std::string& layout_json,
           const std::string& store_path, int max_turns) {
            Task task;
            task.id = "py";
            task.image = std::make_shared<Raster>(image);
            task.question = question;
            task.layout = StructureLayout::from_json(layout_json);
            task.source = "synth";
            ReplayClient client(ReplayStore::load(store_path));
            AgentConfig config;
            config.max_turns = max_turns;
            return episode_to_json(run(task, client, config));
        },
        py::arg("image"), py::arg("question"), py::arg("layout_json"), py::arg("store_path"),
        py::arg("max_turns") = 5,
        "Run one episode against a recorded replay store; returns the episode JSON.");

    m.def(
        "record_script",
        [](const Raster& image, const std::string& question, const std::string& layout_json,
           const std::vector<std::string>& responses, const std::string& store_path,
           int max_turns) {
            struct SequenceClient : ChatClient {
                const std::vector<std::string>* responses;
                std::string complete(const ChatRequest& request) override {
                    size_t turn = 0;
                    for (const ChatMessage& m : request.messages) {
                        if (m.role == Role::assistant) ++turn;
                    }
                    if (turn >= responses->size()) {
                        throw Error("script exhausted after " + std::to_string(turn) + " turns");
                    }
                    return (*responses)[turn];
                }
            };
            Task task;
            task.id = "py";
            task.image = std::make_shared<Raster>(image);
            task.question = question;
            task.layout = StructureLayout::from_json(layout_json);
            task.source = "synth";
            SequenceClient scripted;
            scripted.responses = &responses;
            RecordingClient recorder(scripted, store_path);
            AgentConfig config;
            config.max_turns = max_turns;
            return episode_to_json(run(task, recorder, config));
        },
        py::arg("image"), py::arg("question"), py::arg("layout_json"), py::arg("responses"),
        py::arg("store_path"), py::arg("max_turns") = 5,
        "Record a scripted episode into a replay store (one response per turn); returns the "
        "episode JSON.");
}
