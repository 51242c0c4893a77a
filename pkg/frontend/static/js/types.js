/** Document shapes exchanged with the engine's HTTP API.
 *
 * Every numeric quantity is carried as a pair of strings: `exact` is a
 * rational ("7", "280/47") and `approx` a 12-significant-digit decimal.
 * The explorer never parses `exact`; it only displays it. `approx` is
 * parsed solely for ordering comparisons (warnings), never re-displayed.
 */
export {};
