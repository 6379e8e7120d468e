// Typed client for the dietcheck HTTP API. All verdict data comes from the
// server; the UI never decides matches on its own.

export interface SessionInfo {
  token: string;
  uid: string;
  role: string;
  expires_at: number;
}

export interface Profile {
  uid: string;
  name: string;
  email: string;
  chosen_diets: string[];
  custom_unwanted_ingredients: string[];
  role: string;
  revision: number;
}

export interface DietSummary {
  name: string;
  description: string;
}

export interface DietDetail extends DietSummary {
  forbidden_ingredients: string[];
}

export interface TokenOut {
  index: number;
  text: string;
}

export interface NeedleMatch {
  needle: string;
  diets: string[];
}

export interface ViolationOut {
  token_index: number;
  token_text: string;
  matches: NeedleMatch[];
}

export interface CheckResult {
  verdict: "compliant" | "violations-found";
  tokens: TokenOut[];
  violations: ViolationOut[];
  violated_diets: string[];
}

export type CheckInput =
  | { text: string }
  | { fragments: string[] }
  | { image_b64: string };

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(code: string, message: string, status: number) {
    super(message);
    this.code = code;
    this.status = status;
  }
}

/** True for the error codes that should show the retake-photo prompt. */
export function isRetakeError(error: unknown): boolean {
  return (
    error instanceof ApiError &&
    (error.code === "no_text_found" || error.code === "empty_transcript")
  );
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private token: string | null = null;

  constructor(
    readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  setToken(token: string | null): void {
    this.token = token;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, {
        method,
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (cause) {
      throw new ApiError("network_error", `cannot reach the service: ${cause}`, 0);
    }
    if (!response.ok) {
      let code = "error";
      let message = `request failed with status ${response.status}`;
      try {
        const payload = (await response.json()) as { error?: { code?: string; message?: string } };
        if (payload.error) {
          code = payload.error.code ?? code;
          message = payload.error.message ?? message;
        }
      } catch {
        // non-JSON error body; keep defaults
      }
      throw new ApiError(code, message, response.status);
    }
    return (await response.json()) as T;
  }

  register(name: string, email: string, password: string): Promise<Profile> {
    return this.request<Profile>("POST", "/auth/register", { name, email, password });
  }

  async login(email: string, password: string): Promise<SessionInfo> {
    const session = await this.request<SessionInfo>("POST", "/auth/login", { email, password });
    this.setToken(session.token);
    return session;
  }

  getProfile(): Promise<Profile> {
    return this.request<Profile>("GET", "/profile");
  }

  rename(name: string): Promise<Profile> {
    return this.request<Profile>("PUT", "/profile", { name });
  }

  listDiets(): Promise<{ catalog_version: number; diets: DietSummary[] }> {
    return this.request("GET", "/diets");
  }

  getDiet(name: string): Promise<DietDetail> {
    return this.request<DietDetail>("GET", `/diets/${encodeURIComponent(name)}`);
  }

  chooseDiet(name: string): Promise<Profile> {
    return this.request<Profile>("POST", "/profile/diets", { name });
  }

  removeDiet(name: string): Promise<Profile> {
    return this.request<Profile>("DELETE", `/profile/diets/${encodeURIComponent(name)}`);
  }

  addIngredient(text: string): Promise<Profile> {
    return this.request<Profile>("POST", "/profile/ingredients", { text });
  }

  removeIngredient(text: string): Promise<Profile> {
    return this.request<Profile>("DELETE", `/profile/ingredients/${encodeURIComponent(text)}`);
  }

  check(input: CheckInput): Promise<CheckResult> {
    return this.request<CheckResult>("POST", "/check", input);
  }
}
