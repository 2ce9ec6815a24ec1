/** Thin client for the analysis service; no verdict logic lives here. */

import { NetworkDoc } from "./schema.js";

export interface CheckOptions {
  mode?: "generic" | "numeric" | "both";
  grid?: number;
  tol?: number;
  probe?: number;
  seed?: number;
}

export interface ServiceError {
  status: number;
  error: string;
  pointer?: string;
}

export class ApiClient {
  constructor(public baseUrl: string = "http://127.0.0.1:8321") {}

  private async post(path: string, body: unknown): Promise<string> {
    const r = await fetch(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    const text = await r.text();
    if (!r.ok) {
      let detail: ServiceError = { status: r.status, error: text };
      try {
        detail = { status: r.status, ...JSON.parse(text) };
      } catch {
        /* non-JSON error body */
      }
      throw detail;
    }
    return text;
  }

  /** Raw response text, so callers can compare payloads byte for byte. */
  checkRaw(network: NetworkDoc, options: CheckOptions = {}): Promise<string> {
    return this.post("/v1/check", { network, options });
  }

  async check(network: NetworkDoc, options: CheckOptions = {}) {
    return JSON.parse(await this.checkRaw(network, options));
  }

  async sets(network: NetworkDoc) {
    return JSON.parse(await this.post("/v1/sets", { network }));
  }

  async validate(network: NetworkDoc) {
    return JSON.parse(await this.post("/v1/validate", { network }));
  }

  /** Consistency experiment; yields decoded NDJSON progress events. */
  async *experiment(
    network: NetworkDoc,
    options: { N_grid: number[]; runs: number; seed?: number },
  ): AsyncGenerator<Record<string, unknown>> {
    const r = await fetch(`${this.baseUrl}/v1/experiment`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ network, options }),
    });
    if (!r.ok || !r.body) {
      throw { status: r.status, error: await r.text() };
    }
    const reader = r.body.getReader();
    const decoder = new TextDecoder();
    let buffer = "";
    for (;;) {
      const { done, value } = await reader.read();
      if (done) break;
      buffer += decoder.decode(value, { stream: true });
      let nl;
      while ((nl = buffer.indexOf("\n")) >= 0) {
        const line = buffer.slice(0, nl).trim();
        buffer = buffer.slice(nl + 1);
        if (line) yield JSON.parse(line);
      }
    }
    if (buffer.trim()) yield JSON.parse(buffer);
  }
}
