/** Shared reference values for the figures. */

/** Largest value reachable by causally ordered classical strategies. */
export const CLASSICAL_BOUND = 1.75;

/** Ideal (noiseless) values of the three inequality terms. */
export const IDEAL_TERMS = [0.5, 0.5, 0.853553391] as const;

/**
 * Published experimental operating point overlaid on the sweep figure.
 * These numbers are reported measurement results, not recomputed here.
 */
export const MEASURED = {
  purity: 0.97197,
  total: 1.8427,
  sigma: 0.0038,
} as const;
