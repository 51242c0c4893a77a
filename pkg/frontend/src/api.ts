/** Transport abstraction over the engine's HTTP API.
 *
 * All engine communication flows through a single Transport so tests can
 * intercept it and prove that every displayed number originated in an
 * engine response rather than client-side arithmetic.
 */

import type {
  ClearingDocument,
  ExamplesDocument,
  NetworkDocument,
  ObjectiveSpecBody,
  PlanDocument,
} from "./types.js";

export interface Transport {
  get(path: string): Promise<unknown>;
  post(path: string, body: unknown): Promise<unknown>;
}

export class EngineError extends Error {
  constructor(
    message: string,
    public readonly status: number,
    public readonly detail: unknown,
  ) {
    super(message);
    this.name = "EngineError";
  }
}

/** fetch-backed transport used by the real UI. */
export class HttpTransport implements Transport {
  constructor(private readonly base: string = "") {}

  async get(path: string): Promise<unknown> {
    return this.send(path, undefined);
  }

  async post(path: string, body: unknown): Promise<unknown> {
    return this.send(path, body);
  }

  private async send(path: string, body: unknown): Promise<unknown> {
    const init: RequestInit =
      body === undefined
        ? { method: "GET" }
        : {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify(body),
          };
    const resp = await fetch(this.base + path, init);
    const doc: unknown = await resp.json();
    if (!resp.ok) {
      const message =
        typeof doc === "object" && doc !== null && "message" in doc
          ? String((doc as { message: unknown }).message)
          : `engine request failed (${resp.status})`;
      throw new EngineError(message, resp.status, doc);
    }
    return doc;
  }
}

/** Typed wrapper over the raw transport. Pure plumbing: it forwards
 * documents verbatim and performs no numeric work. */
export class EngineClient {
  constructor(readonly transport: Transport) {}

  async listExamples(): Promise<string[]> {
    const doc = (await this.transport.get("/api/examples")) as ExamplesDocument;
    return doc.examples;
  }

  async loadExample(name: string): Promise<NetworkDocument> {
    return (await this.transport.get(
      `/api/examples/${encodeURIComponent(name)}`,
    )) as NetworkDocument;
  }

  async clear(network: NetworkDocument): Promise<ClearingDocument> {
    return (await this.transport.post("/api/clear", network)) as ClearingDocument;
  }

  async whatif(
    network: NetworkDocument,
    bailout: readonly string[],
  ): Promise<PlanDocument> {
    // The set, not the toggle sequence, determines the request body.
    const body = { network, bailout: [...bailout].sort() };
    return (await this.transport.post("/api/whatif", body)) as PlanDocument;
  }

  async optimize(
    network: NetworkDocument,
    objective: ObjectiveSpecBody,
  ): Promise<PlanDocument> {
    const body = { network, objective };
    return (await this.transport.post("/api/optimize", body)) as PlanDocument;
  }
}

/** Objective the explorer asks the optimizer to solve for a loaded
 * document: welfare (with the document's lambda, default 1) when a
 * central bank is present, otherwise total value. Mirrors the engine's
 * own default; selecting a request parameter is not arithmetic. */
export function objectiveFor(network: NetworkDocument): ObjectiveSpecBody {
  if (network.central_bank !== null) {
    return { kind: "welfare", lambda: network.metadata?.["lambda"] ?? "1" };
  }
  return { kind: "total" };
}
