/* tslint:disable */
/* eslint-disable */

/**
 * Rendered, processed synthetic cooling sequence.
 */
export class Experiment {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * `method` is `fft` (index = DFT bin) or `pca` (index = component, from 1).
     */
    detect(origin: string, method: string, index: number): MapView;
    frame_count(): number;
    /**
     * `origin` is `dolp` or `intensity`.
     */
    frame_rgba(origin: string, index: number): Uint8Array;
    height(): number;
    mask_rgba(): Uint8Array;
    constructor(angle_deg: number, noise_sigma: number, seed: number, frames: number);
    region_names(): string[];
    /**
     * Bins tracking 0.23 / 2.51 / 4.8 Hz for this stack length.
     */
    suggested_bins(): Uint32Array;
    width(): number;
}

/**
 * A detection map rendered for display, with its Al-rubber CNR and
 * boundary sharpness.
 */
export class MapView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly cnr: number;
    readonly label: string;
    readonly rgba: Uint8Array;
    readonly sharpness: number;
}

/**
 * DoLP at incidence angles 0..=89 degrees. `full` selects the microfacet
 * model with `alpha` read as `I_E / I_obj`.
 */
export function dolp_curve(material: string, alpha: number, full: boolean): Float64Array;

export function material_names(): string[];

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_experiment_free: (a: number, b: number) => void;
    readonly __wbg_mapview_free: (a: number, b: number) => void;
    readonly dolp_curve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly experiment_detect: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly experiment_frame_count: (a: number) => number;
    readonly experiment_frame_rgba: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly experiment_height: (a: number) => number;
    readonly experiment_mask_rgba: (a: number) => [number, number];
    readonly experiment_new: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly experiment_region_names: (a: number) => [number, number];
    readonly experiment_suggested_bins: (a: number) => [number, number];
    readonly experiment_width: (a: number) => number;
    readonly mapview_cnr: (a: number) => number;
    readonly mapview_label: (a: number) => [number, number];
    readonly mapview_rgba: (a: number) => [number, number];
    readonly mapview_sharpness: (a: number) => number;
    readonly material_names: () => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_drop_slice: (a: number, b: number) => void;
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
