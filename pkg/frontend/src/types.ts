/** Document shapes exchanged with the engine's HTTP API.
 *
 * Every numeric quantity is carried as a pair of strings: `exact` is a
 * rational ("7", "280/47") and `approx` a 12-significant-digit decimal.
 * The explorer never parses `exact`; it only displays it. `approx` is
 * parsed solely for ordering comparisons (warnings), never re-displayed.
 */

export interface Scalar {
  exact: string;
  approx: string;
}

export interface BankRow {
  id: string;
  cash: string;
}

export interface LiabilityRow {
  from: string;
  to: string;
  amount: string;
  seniority: "junior" | "senior";
}

export interface NetworkDocument {
  schema: number;
  beta: string;
  central_bank: string | null;
  banks: BankRow[];
  liabilities: LiabilityRow[];
  metadata?: Record<string, string>;
}

export interface BankOutcome {
  assets: Scalar;
  post_default_assets: Scalar;
  market_value: Scalar;
  shortfall: Scalar;
  senior_loss: Scalar;
  recovery: Scalar;
  in_default: boolean;
}

export interface PaymentRow {
  from: string;
  to: string;
  amount: Scalar;
}

export interface ClearingDocument {
  schema: number;
  kind: "clearing";
  beta: string;
  central_bank: string | null;
  defaults: string[];
  banks: Record<string, BankOutcome>;
  payments: PaymentRow[];
}

export interface ObjectiveSpecBody {
  kind: "total" | "own" | "saved" | "welfare";
  lambda?: string;
  bank?: string;
  budget?: string;
}

export interface PlanDocument {
  schema: number;
  kind: "plan" | "whatif";
  set: string[];
  amounts: Record<string, Scalar>;
  total_spend: Scalar;
  objective: ObjectiveSpecBody;
  objective_value: Scalar;
  welfare_loss?: Scalar;
  saved?: number;
  feasible: boolean;
  optimal: boolean;
  clearing_after: ClearingDocument;
}

export interface ExamplesDocument {
  examples: string[];
}

export interface ErrorDocument {
  kind: "error";
  error: string;
  message: string;
  fields?: Record<string, string>;
}
