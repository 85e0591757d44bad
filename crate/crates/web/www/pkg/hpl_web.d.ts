/* tslint:disable */
/* eslint-disable */

/**
 * Runs the multiplier search for order `h` and returns the design row as JSON.
 */
export function design_order(window_cycles: number, taylor_order: number, h: number): string;

/**
 * Maximum TVE (%) of order `h` against out-of-band interharmonic amplitude,
 * swept from 0.001 to `max_amplitude` in `steps` points. Returns triples
 * (amplitude, tft, weighted).
 */
export function obi_sweep(window_cycles: number, taylor_order: number, h: number, multipliers: Float64Array, max_amplitude: number, steps: number, seed: bigint): Float64Array;

/**
 * Gain of the plain and the weighted filter of order `h` on `points`
 * frequencies in [f_min, f_max]. Returns triples (f, tft, weighted).
 */
export function response_curves(window_cycles: number, taylor_order: number, h: number, multipliers: Float64Array, f_min: number, f_max: number, points: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly design_order: (a: number, b: number, c: number) => [number, number, number, number];
    readonly obi_sweep: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: bigint) => [number, number, number, number];
    readonly response_curves: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
