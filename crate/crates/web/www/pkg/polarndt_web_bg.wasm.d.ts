/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_experiment_free: (a: number, b: number) => void;
export const __wbg_mapview_free: (a: number, b: number) => void;
export const dolp_curve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const experiment_detect: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const experiment_frame_count: (a: number) => number;
export const experiment_frame_rgba: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const experiment_height: (a: number) => number;
export const experiment_mask_rgba: (a: number) => [number, number];
export const experiment_new: (a: number, b: number, c: number, d: number) => [number, number, number];
export const experiment_region_names: (a: number) => [number, number];
export const experiment_suggested_bins: (a: number) => [number, number];
export const experiment_width: (a: number) => number;
export const mapview_cnr: (a: number) => number;
export const mapview_label: (a: number) => [number, number];
export const mapview_rgba: (a: number) => [number, number];
export const mapview_sharpness: (a: number) => number;
export const material_names: () => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_drop_slice: (a: number, b: number) => void;
export const __wbindgen_start: () => void;
