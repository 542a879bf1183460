import { describe, expect, it } from "vitest";

import { canonicalJson, fnv1a64 } from "../src/protocol";

describe("fnv1a64", () => {
  it("matches the server's reference values", () => {
    // the empty-string value is the FNV-1a 64 offset basis
    expect(fnv1a64("")).toBe("cbf29ce484222325");
    expect(fnv1a64("a")).not.toBe(fnv1a64("b"));
    expect(fnv1a64("tandem")).toBe(fnv1a64("tandem"));
  });
});

describe("canonicalJson", () => {
  it("sorts keys and drops whitespace", () => {
    expect(canonicalJson({ b: 1, a: [2, { d: 3, c: 4 }] })).toBe(
      '{"a":[2,{"c":4,"d":3}],"b":1}',
    );
  });

  it("renders integral numbers without a fraction part", () => {
    expect(canonicalJson({ f: 1.0, g: 0.5, z: 0.0 })).toBe('{"f":1,"g":0.5,"z":0}');
  });

  it("keeps null and booleans in JSON form", () => {
    expect(canonicalJson({ x: null, y: true })).toBe('{"x":null,"y":true}');
  });
});
