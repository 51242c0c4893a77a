/** Outcome panel view-model.
 *
 * Every displayed string is a verbatim `exact` field from an engine
 * response. The only client-side use of numbers is ordering two
 * engine-provided `approx` values to decide whether to show the
 * "worse than doing nothing" warning; the compared values themselves
 * are never re-displayed from the parsed form.
 */

import type { SessionState } from "./state.js";

export interface PanelView {
  loaded: boolean;
  banner: string | null;
  /** Current toggle set, sorted. */
  bailout: string[];
  /** Total spend B for the toggle set, verbatim from the engine. */
  spend: string;
  /** Objective value for the toggle set, verbatim from the engine. */
  objectiveValue: string;
  /** Welfare loss, verbatim; null when the objective has no WL field. */
  welfareLoss: string | null;
  /** Banks defaulting in the baseline but solvent under the toggles. */
  savedBanks: string[];
  /** The optimizer's recommended set and its headline numbers. */
  recommendedSet: string[];
  recommendedSpend: string;
  recommendedWelfareLoss: string | null;
  matchesRecommendation: boolean;
  /** True when the toggled plan is strictly worse than no bailout. */
  worseThanNothing: boolean;
}

const EMPTY: PanelView = {
  loaded: false,
  banner: null,
  bailout: [],
  spend: "",
  objectiveValue: "",
  welfareLoss: null,
  savedBanks: [],
  recommendedSet: [],
  recommendedSpend: "",
  recommendedWelfareLoss: null,
  matchesRecommendation: false,
  worseThanNothing: false,
};

export function buildPanel(state: SessionState): PanelView {
  const { current, baseline, recommendation } = state;
  if (!current || !baseline || !recommendation || !state.clearing) {
    return { ...EMPTY, banner: state.banner };
  }
  const bailout = [...state.toggles].sort();
  const baselineDefaults = new Set(state.clearing.defaults);
  const savedBanks = [...baselineDefaults]
    .filter((id) => !current.clearing_after.defaults.includes(id))
    .sort();
  const recommendedSet = [...recommendation.set].sort();
  return {
    loaded: true,
    banner: state.banner,
    bailout,
    spend: current.total_spend.exact,
    objectiveValue: current.objective_value.exact,
    welfareLoss: current.welfare_loss?.exact ?? null,
    savedBanks,
    recommendedSet,
    recommendedSpend: recommendation.total_spend.exact,
    recommendedWelfareLoss: recommendation.welfare_loss?.exact ?? null,
    matchesRecommendation: sameSet(bailout, recommendedSet),
    worseThanNothing:
      Number(current.objective_value.approx) <
      Number(baseline.objective_value.approx),
  };
}

function sameSet(a: readonly string[], b: readonly string[]): boolean {
  return a.length === b.length && a.every((id, i) => id === b[i]);
}
