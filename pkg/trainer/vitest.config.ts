import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    include: ['test/**/*.test.ts'],
    testTimeout: 600_000,
    hookTimeout: 600_000,
    // tfjs state (backend, registered layers) is global; keep one process
    pool: 'forks',
    poolOptions: { forks: { singleFork: true } },
  },
});
