"""Smoke tests for the Python extension. Run with PYTHONPATH pointing at the
built package (ctest wires this up)."""

import json
import sys

import focal


def test_raster_roundtrip():
    r = focal.Raster(3, 2, (10, 20, 30, 255))
    assert r.width == 3 and r.height == 2
    assert r.at(0, 0) == (10, 20, 30, 255)

    png = focal.save_png(r)
    back = focal.load_png(png)
    assert back.tobytes() == r.tobytes()
    assert focal.pixel_digest(back) == focal.pixel_digest(r)

    # Buffer protocol: height x width x 4 bytes.
    view = memoryview(r)
    assert view.shape == (2, 3, 4)


def test_compositing_value():
    white = focal.Raster(1, 1, (255, 255, 255))
    lit = focal.composite_overlay(white, (0, 0, 0, 0), (255, 0, 0, 50))
    assert lit.at(0, 0) == (255, 205, 205, 255)


def test_detect_and_edit():
    img, truth_json = focal.render_table(
        ["Team", "Country", "Wins"],
        [["Alpha", "Italy", "30"], ["Bravo", "Belgium", "25"], ["Delta", "Belgium", "22"]],
    )
    layout_json = focal.detect_table_layout(img, ["Team", "Country", "Wins"], 3)
    layout = json.loads(layout_json)
    assert layout["kind"] == "table"
    assert list(layout["columns"]) == ["Team", "Country", "Wins"]

    edited, record_json = focal.apply_tool(
        img, layout_json, "focus_on_columns_with_highlight", ["Wins"]
    )
    record = json.loads(record_json)
    assert record["tool"] == "focus_on_columns_with_highlight"
    assert record["input_hash"] != record["output_hash"]
    assert edited.width == img.width and edited.height == img.height

    # Masking every column is a no-op.
    noop, noop_record = focal.apply_tool(
        img, layout_json, "focus_on_columns_with_mask", ["Team", "Country", "Wins"]
    )
    assert focal.pixel_digest(noop) == focal.pixel_digest(img)


def test_registry_and_parser():
    registry = focal.tool_registry()
    assert len(registry) == 15
    names = {entry[0] for entry in registry}
    assert "focus_on_columns_with_highlight" in names

    calls = focal.extract_calls(
        'image = focus_on_columns_with_highlight(image, ["Team", "Wins"], bb)'
    )
    assert calls == [("focus_on_columns_with_highlight", ["Team", "Wins"])]
    assert focal.extract_calls("focus_on_collumns_with_mask(image, [\"T\"], bb)") == []

    assert focal.extract_final_answer("FINAL ANSWER: 24.75. TERMINATE") == "24.75"
    assert focal.extract_final_answer("no marker") is None
    assert focal.has_answer_marker("ANSWER: 4")


def test_score():
    assert focal.score("16", "16")
    assert focal.score(" SIXTEEN", "sixteen")
    assert focal.score("99", "100", mode="relaxed")
    assert not focal.score("94", "100", mode="relaxed")


def test_record_and_replay_episode():
    import os
    import tempfile

    img, _ = focal.render_table(
        ["Team", "Wins"], [["Alpha", "30"], ["Bravo", "25"]]
    )
    layout = focal.detect_table_layout(img, ["Team", "Wins"], 2)
    responses = [
        'THOUGHT: highlight Wins.\n```python\nimage = '
        'focus_on_columns_with_highlight(image, ["Wins"], bb)\n```',
        "ANSWER: 30. FINAL ANSWER: 30. TERMINATE",
    ]
    with tempfile.TemporaryDirectory() as tmp:
        store = os.path.join(tmp, "store.jsonl")
        recorded = json.loads(
            focal.record_script(img, "wins of Alpha?", layout, responses, store)
        )
        assert recorded["status"] == "answered"

        replayed = json.loads(
            focal.run_replay(img, "wins of Alpha?", layout, store)
        )
        assert replayed["final_answer"] == "30"
        assert replayed["edited"] is True
        assert len(replayed["turns"]) == 2
        # Bit-stable across replays.
        again = focal.run_replay(img, "wins of Alpha?", layout, store)
        assert json.loads(again) == replayed


def test_errors_are_python_exceptions():
    try:
        focal.load_png(b"not a png")
    except focal.FocalError:
        pass
    else:
        raise AssertionError("expected FocalError")


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok {test.__name__}")
    print(f"{len(tests)} python smoke tests passed")


if __name__ == "__main__":
    sys.exit(main())
