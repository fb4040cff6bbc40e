// Label overlay drawing. The service projects boxes onto the viewport we
// report, so rects arrive in pixels; this module clamps them defensively to
// the video bounds (an overlay must never paint outside its frame) and
// positions each name above its box.

import type { ProjectedLabel, PxRect } from "./types.js";

export interface ViewBox {
  width: number;
  height: number;
}

export interface Placement {
  name: string;
  rect: PxRect;
  anchor: { x: number; y: number };
}

function clamp(value: number, lo: number, hi: number): number {
  return Math.min(Math.max(value, lo), hi);
}

/** Clamp one rect into the view box; degenerate inputs collapse to edges. */
export function clampRect(rect: PxRect, view: ViewBox): PxRect {
  const x = clamp(rect.x, 0, view.width);
  const y = clamp(rect.y, 0, view.height);
  return {
    x,
    y,
    w: clamp(rect.w, 0, view.width - x),
    h: clamp(rect.h, 0, view.height - y),
  };
}

/** Compute final placements for a scan's labels inside the view box. */
export function placeLabels(labels: ProjectedLabel[], view: ViewBox): Placement[] {
  return labels.map((label) => {
    const rect = clampRect(label.rect_px, view);
    return {
      name: label.name,
      rect,
      anchor: {
        x: clamp(label.anchor_px.x, 0, view.width),
        y: rect.y,
      },
    };
  });
}

/**
 * Render placements as absolutely-positioned children of the overlay
 * element (which must itself be position:relative over the video).
 */
export function renderOverlay(
  overlay: HTMLElement,
  labels: ProjectedLabel[],
  view: ViewBox,
): Placement[] {
  overlay.replaceChildren();
  const placements = placeLabels(labels, view);
  for (const placement of placements) {
    const box = overlay.ownerDocument.createElement("div");
    box.className = "label-box";
    box.style.left = `${placement.rect.x}px`;
    box.style.top = `${placement.rect.y}px`;
    box.style.width = `${placement.rect.w}px`;
    box.style.height = `${placement.rect.h}px`;

    const tag = overlay.ownerDocument.createElement("span");
    tag.className = "label-name";
    tag.textContent = placement.name;
    // Anchored top-center: the name floats above the box edge.
    tag.style.left = `${placement.anchor.x - placement.rect.x}px`;
    box.appendChild(tag);
    overlay.appendChild(box);
  }
  return placements;
}
