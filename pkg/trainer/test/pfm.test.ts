import * as fs from 'fs';
import * as os from 'os';
import * as path from 'path';
import { describe, expect, it } from 'vitest';

import { readPfm, writePfm } from '../src/pfm.js';
import { tinyDataset } from './fixtures.js';

describe('pfm', () => {
  it('round-trips float32 data bit-exactly', () => {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), 'pfm-'));
    const data = new Float32Array(6 * 4);
    for (let i = 0; i < data.length; i++) data[i] = Math.fround(Math.sin(i) * 3.7);
    const p = path.join(dir, 'x.pfm');
    writePfm(p, { width: 4, height: 6, channels: 1, data });
    const back = readPfm(p);
    expect(back.width).toBe(4);
    expect(back.height).toBe(6);
    expect(Array.from(back.data)).toEqual(Array.from(data));
  });

  it('reads depth and normal PFMs written by the generator', () => {
    const ds = tinyDataset();
    const depth = readPfm(path.join(ds, 'views', 'view_0000', 'depth.pfm'));
    expect(depth.width).toBe(32);
    expect(depth.height).toBe(32);
    expect(depth.channels).toBe(1);
    let positive = 0;
    for (const v of depth.data) if (v > 0) positive++;
    expect(positive).toBeGreaterThan(0);
    const normals = readPfm(path.join(ds, 'views', 'view_0000', 'normals.pfm'));
    expect(normals.channels).toBe(3);
    // non-zero normals are unit length
    for (let i = 0; i < normals.data.length; i += 3) {
      const n = Math.hypot(normals.data[i], normals.data[i + 1], normals.data[i + 2]);
      if (n > 0) expect(Math.abs(n - 1)).toBeLessThan(1e-6);
    }
  });

  it('rejects malformed headers', () => {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), 'pfm-'));
    const p = path.join(dir, 'bad.pfm');
    fs.writeFileSync(p, 'P6\n2 2\n-1.0\n' + '\0'.repeat(16));
    expect(() => readPfm(p)).toThrow(/not a PFM/);
    fs.writeFileSync(p, 'Pf\n2 2\n1.0\n' + '\0'.repeat(16));
    expect(() => readPfm(p)).toThrow(/little-endian/);
  });
});
