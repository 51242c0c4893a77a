/** Session state and the toggle/what-if cycle.
 *
 * Invariants:
 *  - the toggle set is always a subset of the banks insolvent in the
 *    baseline clearing (toggles on solvent banks are ignored);
 *  - every number held here is a verbatim engine-response field; the
 *    controller performs no clearing or objective arithmetic;
 *  - a single logical engine exchange is in flight per session: stale
 *    responses (superseded toggles) are discarded by sequence number.
 */

import { EngineClient, EngineError, objectiveFor } from "./api.js";
import type {
  ClearingDocument,
  NetworkDocument,
  ObjectiveSpecBody,
  PlanDocument,
} from "./types.js";

export interface SessionState {
  network: NetworkDocument | null;
  objective: ObjectiveSpecBody | null;
  /** Baseline clearing of the loaded network (no bailouts). */
  clearing: ClearingDocument | null;
  /** Engine response for the empty bailout set. */
  baseline: PlanDocument | null;
  /** Engine response for the current toggle set. */
  current: PlanDocument | null;
  /** The optimizer's recommended plan for the session objective. */
  recommendation: PlanDocument | null;
  toggles: ReadonlySet<string>;
  /** Human-readable banner for engine refusals; null when healthy. */
  banner: string | null;
}

export class SessionController {
  private state: SessionState = {
    network: null,
    objective: null,
    clearing: null,
    baseline: null,
    current: null,
    recommendation: null,
    toggles: new Set(),
    banner: null,
  };
  private seq = 0;
  private listeners: Array<(state: SessionState) => void> = [];

  constructor(private readonly client: EngineClient) {}

  getState(): SessionState {
    return this.state;
  }

  subscribe(listener: (state: SessionState) => void): void {
    this.listeners.push(listener);
  }

  private commit(patch: Partial<SessionState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  /** Banks the user may toggle: exactly the baseline defaulters. */
  insolventIds(): ReadonlySet<string> {
    return new Set(this.state.clearing?.defaults ?? []);
  }

  async loadNetwork(network: NetworkDocument): Promise<void> {
    const seq = ++this.seq;
    const objective = objectiveFor(network);
    try {
      const [clearing, baseline, recommendation] = await Promise.all([
        this.client.clear(network),
        this.client.whatif(network, []),
        this.client.optimize(network, objective),
      ]);
      if (seq !== this.seq) return; // superseded by a newer load
      this.commit({
        network,
        objective,
        clearing,
        baseline,
        recommendation,
        current: baseline,
        toggles: new Set(),
        banner: null,
      });
    } catch (err) {
      if (seq !== this.seq) return;
      this.commit({ banner: bannerText(err) });
    }
  }

  async loadExample(name: string): Promise<void> {
    await this.loadNetwork(await this.client.loadExample(name));
  }

  /** Toggle one bank in or out of the bailout set and refresh the
   * what-if response. Toggling is idempotent per id; the resulting set,
   * not the click order, determines the request. */
  async toggle(id: string): Promise<void> {
    const { network } = this.state;
    if (!network || !this.insolventIds().has(id)) return; // disabled
    const toggles = new Set(this.state.toggles);
    if (toggles.has(id)) toggles.delete(id);
    else toggles.add(id);

    const seq = ++this.seq;
    if (toggles.size === 0) {
      // Involution: back to the already-held baseline response.
      this.commit({ toggles, current: this.state.baseline, banner: null });
      return;
    }
    try {
      const current = await this.client.whatif(network, [...toggles]);
      if (seq !== this.seq) return; // a newer toggle superseded this one
      this.commit({ toggles, current, banner: null });
    } catch (err) {
      if (seq !== this.seq) return;
      // Engine refusal: surface a banner, leave the session unchanged.
      this.commit({ banner: bannerText(err) });
    }
  }
}

function bannerText(err: unknown): string {
  if (err instanceof EngineError) {
    return err.status === 413
      ? `engine refused (capacity): ${err.message}`
      : `engine error: ${err.message}`;
  }
  return `engine unreachable: ${String(err)}`;
}
