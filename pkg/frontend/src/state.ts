// Client-side view state. Every profile mutation is followed by a profile
// re-fetch so the screen always shows server state after the round trip;
// at most one label check is in flight at a time.

import { ApiClient, ApiError } from "./api.js";
import type { CheckInput, CheckResult, DietDetail, Profile, SessionInfo } from "./api.js";

export interface ViewState {
  session: SessionInfo | null;
  profile: Profile | null;
  catalog: DietDetail[];
  lastResult: CheckResult | null;
  lastError: ApiError | null;
  checking: boolean;
}

export type Listener = (state: ViewState) => void;

export class AppStore {
  readonly state: ViewState = {
    session: null,
    profile: null,
    catalog: [],
    lastResult: null,
    lastError: null,
    checking: false,
  };

  private listeners: Listener[] = [];

  constructor(readonly api: ApiClient) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  async register(name: string, email: string, password: string): Promise<void> {
    await this.api.register(name, email, password);
    await this.login(email, password);
  }

  async login(email: string, password: string): Promise<void> {
    this.state.session = await this.api.login(email, password);
    await this.refreshProfile();
    await this.refreshCatalog();
  }

  logout(): void {
    this.api.setToken(null);
    this.state.session = null;
    this.state.profile = null;
    this.state.lastResult = null;
    this.state.lastError = null;
    this.emit();
  }

  async refreshProfile(): Promise<void> {
    this.state.profile = await this.api.getProfile();
    this.emit();
  }

  async refreshCatalog(): Promise<void> {
    const listing = await this.api.listDiets();
    const details = await Promise.all(
      listing.diets.map((diet) => this.api.getDiet(diet.name)),
    );
    this.state.catalog = details;
    this.emit();
  }

  /** Run one profile mutation, then re-fetch the profile snapshot. */
  private async mutate(action: () => Promise<Profile>): Promise<void> {
    await action();
    await this.refreshProfile();
  }

  chooseDiet(name: string): Promise<void> {
    return this.mutate(() => this.api.chooseDiet(name));
  }

  removeDiet(name: string): Promise<void> {
    return this.mutate(() => this.api.removeDiet(name));
  }

  addIngredient(text: string): Promise<void> {
    return this.mutate(() => this.api.addIngredient(text));
  }

  removeIngredient(text: string): Promise<void> {
    return this.mutate(() => this.api.removeIngredient(text));
  }

  /** Submit one label check; concurrent submissions are ignored. */
  async check(input: CheckInput): Promise<void> {
    if (this.state.checking) return;
    this.state.checking = true;
    this.state.lastError = null;
    this.emit();
    try {
      this.state.lastResult = await this.api.check(input);
    } catch (error) {
      this.state.lastResult = null;
      this.state.lastError =
        error instanceof ApiError
          ? error
          : new ApiError("error", String(error), 0);
    } finally {
      this.state.checking = false;
      this.emit();
    }
  }
}
