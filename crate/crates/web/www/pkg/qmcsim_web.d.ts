/* tslint:disable */
/* eslint-disable */

export function ae_distribution(a: number, phase_bits: number): Float64Array;

/**
 * The estimate `sin²(πy/2^t)` read off outcome `y`.
 */
export function ae_estimate(outcome: number, phase_bits: number): number;

export function grover_curve(index_bits: number, marked: number): Float64Array;

export function optimal_iterations(index_bits: number): number;

/**
 * `seed` is 32-bit so the page can pass an ordinary number.
 */
export function qrng_histogram(qubits: number, samples: number, seed: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly ae_distribution: (a: number, b: number) => [number, number, number, number];
    readonly ae_estimate: (a: number, b: number) => number;
    readonly grover_curve: (a: number, b: number) => [number, number, number, number];
    readonly optimal_iterations: (a: number) => number;
    readonly qrng_histogram: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
