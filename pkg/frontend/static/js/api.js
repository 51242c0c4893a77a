/** Transport abstraction over the engine's HTTP API.
 *
 * All engine communication flows through a single Transport so tests can
 * intercept it and prove that every displayed number originated in an
 * engine response rather than client-side arithmetic.
 */
export class EngineError extends Error {
    constructor(message, status, detail) {
        super(message);
        this.status = status;
        this.detail = detail;
        this.name = "EngineError";
    }
}
/** fetch-backed transport used by the real UI. */
export class HttpTransport {
    constructor(base = "") {
        this.base = base;
    }
    async get(path) {
        return this.send(path, undefined);
    }
    async post(path, body) {
        return this.send(path, body);
    }
    async send(path, body) {
        const init = body === undefined
            ? { method: "GET" }
            : {
                method: "POST",
                headers: { "content-type": "application/json" },
                body: JSON.stringify(body),
            };
        const resp = await fetch(this.base + path, init);
        const doc = await resp.json();
        if (!resp.ok) {
            const message = typeof doc === "object" && doc !== null && "message" in doc
                ? String(doc.message)
                : `engine request failed (${resp.status})`;
            throw new EngineError(message, resp.status, doc);
        }
        return doc;
    }
}
/** Typed wrapper over the raw transport. Pure plumbing: it forwards
 * documents verbatim and performs no numeric work. */
export class EngineClient {
    constructor(transport) {
        this.transport = transport;
    }
    async listExamples() {
        const doc = (await this.transport.get("/api/examples"));
        return doc.examples;
    }
    async loadExample(name) {
        return (await this.transport.get(`/api/examples/${encodeURIComponent(name)}`));
    }
    async clear(network) {
        return (await this.transport.post("/api/clear", network));
    }
    async whatif(network, bailout) {
        // The set, not the toggle sequence, determines the request body.
        const body = { network, bailout: [...bailout].sort() };
        return (await this.transport.post("/api/whatif", body));
    }
    async optimize(network, objective) {
        const body = { network, objective };
        return (await this.transport.post("/api/optimize", body));
    }
}
/** Objective the explorer asks the optimizer to solve for a loaded
 * document: welfare (with the document's lambda, default 1) when a
 * central bank is present, otherwise total value. Mirrors the engine's
 * own default; selecting a request parameter is not arithmetic. */
export function objectiveFor(network) {
    if (network.central_bank !== null) {
        return { kind: "welfare", lambda: network.metadata?.["lambda"] ?? "1" };
    }
    return { kind: "total" };
}
