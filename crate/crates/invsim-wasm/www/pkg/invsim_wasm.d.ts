/* tslint:disable */
/* eslint-disable */

/**
 * Standard atmosphere from `h0` to `h1` (m) every `step` m.
 */
export function atmosphere_profile(h0: number, h1: number, step: number): string;

/**
 * Controls for a Mirage III double roll at the given speed (m/s), height
 * (m), duration (s) and step (s).
 */
export function double_roll(speed: number, height: number, duration: number, dt: number): string;

/**
 * Pitch/yaw orbits of the standard Mirage double roll for each step in
 * `dts`, with the gap between the two loops.
 */
export function orbit_convergence(dts: Float64Array): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly atmosphere_profile: (a: number, b: number, c: number) => [number, number];
    readonly double_roll: (a: number, b: number, c: number, d: number) => [number, number];
    readonly orbit_convergence: (a: number, b: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
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
