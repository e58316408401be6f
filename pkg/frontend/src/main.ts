// DOM glue: wires the pure renderers and controllers to the page served
// by the session server. Two screens: configure and simulate.

import { ApiClient, ApiError } from './api.js';
import { renderErrorBanner, renderFeatureTree, renderScreen, renderVerdict } from './render.js';
import { ConfigDraft, SessionController } from './state.js';
import type { InputEvent } from './types.js';

const KEY_EVENTS: Record<string, InputEvent> = {
  ArrowUp: 'up',
  ArrowDown: 'down',
  Enter: 'select',
  Escape: 'back',
};

async function boot(): Promise<void> {
  const api = new ApiClient();
  const configPane = document.getElementById('config-pane')!;
  const simPane = document.getElementById('sim-pane')!;
  const treeHost = document.getElementById('feature-tree')!;
  const verdictHost = document.getElementById('verdict')!;
  const screenHost = document.getElementById('screen')!;
  const bannerHost = document.getElementById('banner')!;
  const startButton = document.getElementById('start') as HTMLButtonElement;
  const stopButton = document.getElementById('stop') as HTMLButtonElement;
  const titleHost = document.getElementById('model-name')!;

  let banner = '';
  const setBanner = (message: string) => {
    banner = message;
    redraw();
  };

  const fm = await api.featureModel();
  titleHost.textContent = fm.name;

  const session = new SessionController(api, () => redraw(), setBanner);
  const draft = new ConfigDraft(api, fm, () => redraw());

  function redraw(): void {
    bannerHost.innerHTML = banner ? renderErrorBanner(banner) : '';
    configPane.hidden = session.active;
    simPane.hidden = !session.active;
    if (session.active && session.view) {
      screenHost.innerHTML = renderScreen(session.view);
      return;
    }
    treeHost.innerHTML = renderFeatureTree(draft.tree, draft.selected, draft.locked);
    verdictHost.innerHTML = renderVerdict(draft.lastVerdict);
    startButton.disabled = !draft.startEnabled;
  }

  treeHost.addEventListener('change', (ev) => {
    const box = ev.target as HTMLInputElement;
    const name = box.dataset.feature;
    if (name) draft.toggle(name).catch((err) => setBanner(describe(err)));
  });

  startButton.addEventListener('click', () => {
    banner = '';
    session
      .start([...draft.selected].sort())
      .catch((err) => setBanner(describe(err)));
  });

  stopButton.addEventListener('click', () => {
    session.close().catch(() => undefined);
  });

  document.addEventListener('keydown', (ev) => {
    const event = KEY_EVENTS[ev.key];
    if (!event || !session.active) return;
    ev.preventDefault();
    session.send(event).catch((err) => setBanner(describe(err)));
  });

  await draft.refreshVerdict();
}

function describe(err: unknown): string {
  if (err instanceof ApiError) {
    const body = err.body as { error?: string; diagnostics?: { message: string }[] } | null;
    if (body?.error) return body.error;
    if (body?.diagnostics) return body.diagnostics.map((d) => d.message).join('; ');
    return `server error (HTTP ${err.status})`;
  }
  return String(err);
}

boot().catch((err) => {
  document.body.innerHTML = renderErrorBanner(describe(err));
});
