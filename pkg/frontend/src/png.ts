import { Resvg } from "@resvg/resvg-js";

const FONT_FILE = "/usr/share/fonts/truetype/dejavu/DejaVuSans.ttf";

/** Render SVG to PNG bytes with a fixed font set so output is byte-stable. */
export function renderPng(svg: string, meta: Record<string, unknown>): Buffer {
  const resvg = new Resvg(svg, {
    font: {
      loadSystemFonts: false,
      fontFiles: [FONT_FILE],
      defaultFontFamily: "DejaVu Sans",
    },
  });
  const png = resvg.render().asPng();
  return insertTextChunk(Buffer.from(png), "figviz", JSON.stringify(meta));
}

/** Extract the metadata JSON written by renderPng, or null if absent. */
export function readMetadata(png: Buffer): Record<string, unknown> | null {
  let pos = 8;
  while (pos + 8 <= png.length) {
    const len = png.readUInt32BE(pos);
    const type = png.toString("latin1", pos + 4, pos + 8);
    if (type === "tEXt") {
      const data = png.subarray(pos + 8, pos + 8 + len);
      const sep = data.indexOf(0);
      if (sep >= 0 && data.toString("latin1", 0, sep) === "figviz") {
        return JSON.parse(data.toString("latin1", sep + 1));
      }
    }
    pos += 12 + len;
  }
  return null;
}

/** Insert a tEXt chunk (keyword\0text) right after the IHDR chunk. */
function insertTextChunk(png: Buffer, keyword: string, text: string): Buffer {
  const data = Buffer.concat([
    Buffer.from(keyword, "latin1"),
    Buffer.from([0]),
    Buffer.from(text, "latin1"),
  ]);
  const chunk = Buffer.alloc(12 + data.length);
  chunk.writeUInt32BE(data.length, 0);
  chunk.write("tEXt", 4, "latin1");
  data.copy(chunk, 8);
  chunk.writeUInt32BE(crc32(chunk.subarray(4, 8 + data.length)), 8 + data.length);
  const ihdrEnd = 8 + 12 + png.readUInt32BE(8);
  return Buffer.concat([png.subarray(0, ihdrEnd), chunk, png.subarray(ihdrEnd)]);
}

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(buf: Buffer): number {
  let c = 0xffffffff;
  for (const byte of buf) {
    c = CRC_TABLE[(c ^ byte) & 0xff] ^ (c >>> 8);
  }
  return (c ^ 0xffffffff) >>> 0;
}
