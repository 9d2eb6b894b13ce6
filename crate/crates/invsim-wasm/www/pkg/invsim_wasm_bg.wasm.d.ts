/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const atmosphere_profile: (a: number, b: number, c: number) => [number, number];
export const double_roll: (a: number, b: number, c: number, d: number) => [number, number];
export const orbit_convergence: (a: number, b: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_start: () => void;
