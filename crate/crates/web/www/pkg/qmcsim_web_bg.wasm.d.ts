/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const ae_distribution: (a: number, b: number) => [number, number, number, number];
export const ae_estimate: (a: number, b: number) => number;
export const grover_curve: (a: number, b: number) => [number, number, number, number];
export const optimal_iterations: (a: number) => number;
export const qrng_histogram: (a: number, b: number, c: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
