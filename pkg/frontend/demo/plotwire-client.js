/**
 * plotwire thin client: binds an interactive server-rendered plot to a page
 * element. Mouse gestures become nav calls, responses become PNG frames; no
 * table data is ever held client-side, so memory use is independent of the
 * table behind the plot.
 *
 * Request discipline: at most one nav and one frame request in flight per
 * handle. Gestures arriving mid-flight merge into a pending action (wheel
 * factors multiply, pan deltas add), so bursts collapse to a handful of
 * requests while the net transform is preserved exactly.
 */
const ROTATE_RAD_PER_PX = 0.01;
const CLICK_SLOP_PX = 3;
function mergeNav(tail, next) {
    if (tail.action === "zoom" && next.action === "zoom") {
        // composition of zooms anchored at the cursor: factors multiply,
        // the latest anchor wins
        return { action: "zoom", factor: tail.factor * next.factor, cx: next.cx, cy: next.cy };
    }
    if (tail.action === "pan" && next.action === "pan") {
        return { action: "pan", dx: tail.dx + next.dx, dy: tail.dy + next.dy };
    }
    if (tail.action === "rotate" && next.action === "rotate") {
        return { action: "rotate", yaw: tail.yaw + next.yaw, pitch: tail.pitch + next.pitch };
    }
    return null;
}
export class PlotHandle {
    constructor(element, serverUrl, plotType, opts) {
        this.sessionId = null;
        this.seq = -1; // displayed frame's seq; never decreases
        this.view = null;
        this.listeners = [];
        this.img = null;
        this.popup = null;
        this.badge = null;
        this.objectUrl = null;
        this.lastIdentify = null;
        this.navQueue = [];
        this.navInFlight = false;
        this.frameInFlight = false;
        this.frameDirty = false;
        this.disposed = false;
        this.drag = null;
        this.element = element;
        this.serverUrl = serverUrl.replace(/\/+$/, "");
        this.isCube = plotType.startsWith("cube.");
        this.transport = opts.transport ?? ((url, init) => fetch(url, init));
        this.opts = opts;
    }
    get width() {
        return this.element.clientWidth || 640;
    }
    get height() {
        return this.element.clientHeight || 480;
    }
    // -- lifecycle ------------------------------------------------------------
    async start(table, options, plotType) {
        const res = await this.transport(`${this.serverUrl}/api/sessions`, {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({ table, spec: { type: plotType, options } }),
        });
        if (!res.ok) {
            this.opts.onError?.(await errorBody(res));
            return;
        }
        const body = await res.json();
        this.sessionId = body.sessionId;
        this.view = body.view;
        this.attachListeners();
        await this.requestFrame();
    }
    async dispose() {
        if (this.disposed)
            return;
        this.disposed = true;
        for (const [type, fn] of this.listeners) {
            this.element.removeEventListener(type, fn);
        }
        this.listeners.length = 0;
        if (this.objectUrl) {
            URL.revokeObjectURL(this.objectUrl);
            this.objectUrl = null;
        }
        if (this.img)
            this.element.removeChild(this.img);
        if (this.popup)
            this.element.removeChild(this.popup);
        if (this.badge)
            this.element.removeChild(this.badge);
        this.img = this.popup = this.badge = null;
        this.lastIdentify = null;
        if (this.sessionId) {
            const sid = this.sessionId;
            this.sessionId = null;
            try {
                await this.transport(`${this.serverUrl}/api/sessions/${sid}`, { method: "DELETE" });
            }
            catch {
                // session expires server-side regardless
            }
        }
    }
    // -- gestures -------------------------------------------------------------
    attachListeners() {
        const on = (type, fn) => {
            this.element.addEventListener(type, fn);
            this.listeners.push([type, fn]);
        };
        on("wheel", (e) => this.onWheel(e));
        on("mousedown", (e) => this.onMouseDown(e));
        on("mousemove", (e) => this.onMouseMove(e));
        on("mouseup", (e) => this.onMouseUp(e));
        on("contextmenu", (e) => e.preventDefault?.());
    }
    onWheel(e) {
        e.preventDefault?.();
        const base = this.opts.wheelZoomFactor ?? 1.2;
        const factor = e.deltaY < 0 ? base : 1 / base;
        this.enqueueNav({ action: "zoom", factor, cx: e.offsetX, cy: e.offsetY });
    }
    onMouseDown(e) {
        const rotate = this.isCube && (e.button === 2 || !!e.shiftKey);
        this.drag = { x: e.offsetX, y: e.offsetY, moved: false, rotate };
    }
    onMouseMove(e) {
        if (!this.drag)
            return;
        const dx = e.offsetX - this.drag.x;
        const dy = e.offsetY - this.drag.y;
        if (!this.drag.moved && Math.abs(dx) < CLICK_SLOP_PX && Math.abs(dy) < CLICK_SLOP_PX) {
            return;
        }
        this.drag.moved = true;
        this.drag.x = e.offsetX;
        this.drag.y = e.offsetY;
        if (this.drag.rotate) {
            this.enqueueNav({ action: "rotate", yaw: dx * ROTATE_RAD_PER_PX, pitch: dy * ROTATE_RAD_PER_PX });
        }
        else {
            this.enqueueNav({ action: "pan", dx, dy });
        }
    }
    onMouseUp(e) {
        const drag = this.drag;
        this.drag = null;
        if (drag && !drag.moved) {
            void this.identify(e.offsetX, e.offsetY);
        }
    }
    // -- protocol -------------------------------------------------------------
    enqueueNav(action) {
        if (this.disposed || !this.sessionId)
            return;
        const tail = this.navQueue[this.navQueue.length - 1];
        const merged = tail ? mergeNav(tail, action) : null;
        if (merged) {
            this.navQueue[this.navQueue.length - 1] = merged;
        }
        else {
            this.navQueue.push(action);
        }
        void this.pumpNav();
    }
    async pumpNav() {
        if (this.navInFlight || this.disposed || !this.sessionId)
            return;
        const action = this.navQueue.shift();
        if (!action)
            return;
        this.navInFlight = true;
        try {
            const res = await this.transport(`${this.serverUrl}/api/sessions/${this.sessionId}/nav`, {
                method: "POST",
                headers: { "content-type": "application/json" },
                body: JSON.stringify({ ...action, w: this.width, h: this.height }),
            });
            if (res.ok) {
                const body = await res.json();
                this.view = body.view;
                this.clearBadge();
            }
            else {
                this.opts.onError?.(await errorBody(res));
            }
        }
        catch {
            this.showBadge();
        }
        finally {
            this.navInFlight = false;
        }
        if (this.navQueue.length > 0) {
            void this.pumpNav();
        }
        else {
            void this.requestFrame();
        }
    }
    async requestFrame() {
        if (this.disposed || !this.sessionId)
            return;
        if (this.frameInFlight) {
            this.frameDirty = true;
            return;
        }
        this.frameInFlight = true;
        this.frameDirty = false;
        try {
            const res = await this.transport(`${this.serverUrl}/api/sessions/${this.sessionId}/frame?w=${this.width}&h=${this.height}`);
            if (res.ok) {
                const seq = Number(res.headers.get("X-Seq") ?? res.headers.get("x-seq") ?? "0");
                const raw = await res.arrayBuffer();
                if (seq >= this.seq) {
                    this.displayFrame(raw, seq);
                    const viewHeader = res.headers.get("X-View") ?? res.headers.get("x-view");
                    if (viewHeader)
                        this.view = JSON.parse(viewHeader);
                }
                this.clearBadge();
            }
            else {
                this.opts.onError?.(await errorBody(res));
            }
        }
        catch {
            this.showBadge(); // stale frame stays up
        }
        finally {
            this.frameInFlight = false;
        }
        if (this.frameDirty && !this.disposed) {
            void this.requestFrame();
        }
    }
    displayFrame(raw, seq) {
        this.seq = seq;
        if (!this.img) {
            this.img = this.element.ownerDocument.createElement("img");
            this.img.draggable = false;
            this.element.appendChild(this.img);
        }
        const next = URL.createObjectURL(new Blob([raw], { type: "image/png" }));
        this.img.src = next;
        if (this.objectUrl)
            URL.revokeObjectURL(this.objectUrl); // hold one frame only
        this.objectUrl = next;
    }
    async identify(cx, cy) {
        if (this.disposed || !this.sessionId)
            return;
        const r = this.opts.identifyRadiusPx ?? 4;
        try {
            const res = await this.transport(`${this.serverUrl}/api/sessions/${this.sessionId}/identify` +
                `?x=${cx}&y=${cy}&r=${r}&w=${this.width}&h=${this.height}`);
            if (!res.ok) {
                this.opts.onError?.(await errorBody(res));
                return;
            }
            const result = await res.json();
            this.lastIdentify = result; // previous payload dropped
            this.showPopup(result, cx, cy);
            this.opts.onIdentify?.(result);
        }
        catch {
            this.showBadge();
        }
    }
    // -- tiny bits of DOM -----------------------------------------------------
    showPopup(result, cx, cy) {
        if (!this.popup) {
            this.popup = this.element.ownerDocument.createElement("div");
            this.popup.style.position = "absolute";
            this.popup.style.background = "rgba(255,255,250,0.95)";
            this.popup.style.border = "1px solid #888";
            this.popup.style.font = "12px monospace";
            this.popup.style.padding = "4px 6px";
            this.popup.style.pointerEvents = "none";
            this.element.appendChild(this.popup);
        }
        this.popup.style.left = `${cx + 8}px`;
        this.popup.style.top = `${cy + 8}px`;
        if (result.row === null) {
            this.popup.textContent = "no point";
        }
        else {
            const lines = Object.entries(result.row.cells).map(([k, v]) => `${k}: ${v === null ? "" : v}`);
            this.popup.textContent = `row ${result.row.index}\n` + lines.join("\n");
            this.popup.style.whiteSpace = "pre";
        }
    }
    showBadge() {
        if (!this.badge) {
            this.badge = this.element.ownerDocument.createElement("div");
            this.badge.style.position = "absolute";
            this.badge.style.right = "4px";
            this.badge.style.top = "4px";
            this.badge.style.background = "#c33";
            this.badge.style.color = "#fff";
            this.badge.style.padding = "1px 6px";
            this.badge.textContent = "!";
            this.element.appendChild(this.badge);
        }
        this.badge.style.display = "block";
    }
    clearBadge() {
        if (this.badge)
            this.badge.style.display = "none";
    }
}
async function errorBody(res) {
    try {
        return (await res.json());
    }
    catch {
        return { code: "INTERNAL", message: `http ${res.status}` };
    }
}
/**
 * Bind an interactive plot to `element`. The element should be positioned
 * (e.g. `position: relative`) and sized; the frame adopts its pixel size.
 */
export function embedPlot(element, serverUrl, table, spec, opts = {}) {
    const handle = new PlotHandle(element, serverUrl, spec.type, opts);
    void handle.start(table, spec.options, spec.type);
    return handle;
}
/** Tear down a handle: session deleted, listeners and DOM removed. */
export function dispose(handle) {
    return handle.dispose();
}
