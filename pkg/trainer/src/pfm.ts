/**
 * PFM read/write matching the dataset convention: 32-bit float little-endian
 * (negative scale), rows stored top-to-bottom so pixel (0,0) is top-left.
 */

import * as fs from 'fs';

export interface PfmImage {
  width: number;
  height: number;
  channels: 1 | 3;
  /** row-major, interleaved channels, length = width * height * channels */
  data: Float32Array;
}

export function readPfm(path: string): PfmImage {
  const buf = fs.readFileSync(path);
  let off = 0;
  const readLine = (): string => {
    const nl = buf.indexOf(0x0a, off);
    if (nl < 0) throw new Error(`${path}: truncated PFM header`);
    const line = buf.toString('ascii', off, nl).trim();
    off = nl + 1;
    return line;
  };
  const magic = readLine();
  if (magic !== 'PF' && magic !== 'Pf') {
    throw new Error(`${path}: not a PFM file (magic ${magic})`);
  }
  const channels = magic === 'PF' ? 3 : 1;
  const dims = readLine().split(/\s+/).map(Number);
  if (dims.length !== 2 || !dims.every(Number.isFinite)) {
    throw new Error(`${path}: malformed PFM dimensions`);
  }
  const [width, height] = dims;
  const scale = Number(readLine());
  if (!(scale < 0)) {
    throw new Error(`${path}: only little-endian top-to-bottom PFM supported`);
  }
  const n = width * height * channels;
  if (buf.length - off < 4 * n) throw new Error(`${path}: truncated PFM payload`);
  const data = new Float32Array(n);
  for (let i = 0; i < n; i++) data[i] = buf.readFloatLE(off + 4 * i);
  return { width, height, channels: channels as 1 | 3, data };
}

export function writePfm(path: string, img: PfmImage): void {
  const header = `${img.channels === 3 ? 'PF' : 'Pf'}\n${img.width} ${img.height}\n-1.0\n`;
  const payload = Buffer.alloc(4 * img.data.length);
  for (let i = 0; i < img.data.length; i++) payload.writeFloatLE(img.data[i], 4 * i);
  fs.writeFileSync(path, Buffer.concat([Buffer.from(header, 'ascii'), payload]));
}
