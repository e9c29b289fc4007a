import { describe, expect, it } from "vitest";

import { EditorState, overlayFromResult } from "../src/state.js";

describe("EditorState drafting", () => {
  it("collects vertices per tool and knows when a preview is possible", () => {
    const state = new EditorState();
    state.setTool("line");
    expect(state.canPreview()).toBe(false);
    state.addVertex(1, 2);
    expect(state.canPreview()).toBe(false);
    state.addVertex(3, 4);
    expect(state.canPreview()).toBe(true);
    expect(state.draftBody("L").coords).toEqual([[1, 2], [3, 4]]);
  });

  it("a point keeps only the latest vertex", () => {
    const state = new EditorState();
    state.setTool("point");
    state.addVertex(1, 1);
    state.addVertex(2, 2);
    expect(state.vertices).toEqual([[2, 2]]);
    expect(state.draftBody("P").kind).toBe("point");
  });

  it("areas need three vertices", () => {
    const state = new EditorState();
    state.setTool("area");
    state.addVertex(0, 0);
    state.addVertex(1, 0);
    expect(state.canPreview()).toBe(false);
    state.addVertex(1, 1);
    expect(state.canPreview()).toBe(true);
  });

  it("switching tools clears the draft and its preview", () => {
    const state = new EditorState();
    state.setTool("line");
    state.addVertex(0, 0);
    state.addVertex(1, 1);
    state.setPreviewOverlay(["0"], [[0, 0, 0.5, 0.5]]);
    state.setTool("area");
    expect(state.vertices).toEqual([]);
    expect(state.overlay).toBeNull();
  });

  it("switching tools never drops a server overlay", () => {
    const state = new EditorState();
    state.setServerOverlay(["3"], [[0.5, 0.5, 1, 1]]);
    state.setTool("point");
    expect(state.overlay?.source).toBe("server");
  });

  it("undo removes the last vertex and clears an empty preview", () => {
    const state = new EditorState();
    state.setTool("line");
    state.addVertex(0, 0);
    state.setPreviewOverlay(["0"], [[0, 0, 0.5, 0.5]]);
    state.undoVertex();
    expect(state.vertices).toEqual([]);
    expect(state.overlay).toBeNull();
  });

  it("select tool ignores clicks", () => {
    const state = new EditorState();
    state.setTool("select");
    state.addVertex(5, 5);
    expect(state.vertices).toEqual([]);
    expect(state.canPreview()).toBe(false);
  });

  it("draftBody rejects incomplete geometry", () => {
    const state = new EditorState();
    state.setTool("area");
    state.addVertex(0, 0);
    expect(() => state.draftBody("half")).toThrow();
  });
});

describe("level handling", () => {
  it("clamps to 1..16", () => {
    const state = new EditorState();
    state.setLevel(0);
    expect(state.level).toBe(1);
    state.setLevel(99);
    expect(state.level).toBe(16);
    state.setLevel(7.4);
    expect(state.level).toBe(7);
  });

  it("the draft body carries the chosen level", () => {
    const state = new EditorState();
    state.setTool("point");
    state.setLevel(3);
    state.addVertex(1, 1);
    expect(state.draftBody("P").level).toBe(3);
  });
});

describe("overlayFromResult", () => {
  it("collects every CODE column value with its rect", () => {
    const overlay = overlayFromResult(
      ["TEXT", "CODE"],
      [
        ["A", "0"],
        ["B", "3"],
        ["C", null],
      ],
    );
    expect(overlay.codes).toEqual(["0", "3"]);
    expect(overlay.rects).toEqual([
      [0, 0, 0.5, 0.5],
      [0.5, 0.5, 1, 1],
    ]);
  });

  it("nominal-only results highlight nothing", () => {
    const overlay = overlayFromResult(["TEXT"], [["Insurgentes"], ["Reforma"]]);
    expect(overlay.codes).toEqual([]);
    expect(overlay.rects).toEqual([]);
  });

  it("understands the root spelling", () => {
    const overlay = overlayFromResult(["CODE"], [["@"]]);
    expect(overlay.rects).toEqual([[0, 0, 1, 1]]);
  });
});
