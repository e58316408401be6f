// Controllers holding the two pieces of client state: the configuration
// draft (with its latest server verdict) and the running session.

import { ApiClient, ApiError } from './api.js';
import { buildTree, lockedFeatures, toggleSelection, type TreeNode } from './model.js';
import type {
  FeatureModelPayload,
  InputEvent,
  ValidatePayload,
  ViewModel,
} from './types.js';

export class ConfigDraft {
  readonly tree: TreeNode;
  readonly locked: Set<string>;
  selected: Set<string>;
  lastVerdict: ValidatePayload | null = null;
  private seq = 0;

  constructor(
    private api: ApiClient,
    fm: FeatureModelPayload,
    private onChange: () => void,
  ) {
    this.tree = buildTree(fm);
    this.locked = lockedFeatures(fm);
    this.selected = new Set(this.locked);
  }

  get startEnabled(): boolean {
    return this.lastVerdict !== null && this.lastVerdict.valid;
  }

  async refreshVerdict(): Promise<void> {
    // responses arriving out of order are discarded
    const mySeq = ++this.seq;
    this.lastVerdict = null;
    this.onChange();
    const verdict = await this.api.validate([...this.selected].sort());
    if (mySeq !== this.seq) return;
    this.lastVerdict = verdict;
    this.onChange();
  }

  async toggle(name: string): Promise<void> {
    if (this.locked.has(name)) return;
    this.selected = toggleSelection(this.tree, this.selected, name);
    await this.refreshVerdict();
  }
}

export class SessionController {
  private sessionId: string | null = null;
  view: ViewModel | null = null;
  private inflight = false;

  constructor(
    private api: ApiClient,
    private onChange: () => void,
    private onExpired: (message: string) => void,
  ) {}

  get active(): boolean {
    return this.sessionId !== null;
  }

  async start(select: string[]): Promise<void> {
    const created = await this.api.createSession(select);
    this.sessionId = created.sessionId;
    this.view = created.view;
    this.onChange();
  }

  /** Send one input; a new input is not sent until the previous response
   * has been rendered. */
  async send(event: InputEvent): Promise<void> {
    if (this.sessionId === null || this.inflight) return;
    this.inflight = true;
    try {
      const resp = await this.api.sendInput(this.sessionId, event);
      this.view = resp.view;
      this.onChange();
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        this.sessionId = null;
        this.view = null;
        this.onExpired('session expired; configure a new one');
        return;
      }
      throw err;
    } finally {
      this.inflight = false;
    }
  }

  async close(): Promise<void> {
    if (this.sessionId === null) return;
    const id = this.sessionId;
    this.sessionId = null;
    this.view = null;
    await this.api.closeSession(id).catch(() => undefined);
    this.onChange();
  }
}
