// Small DOM builders; no framework, no innerHTML for data values.

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child instanceof Node ? child : document.createTextNode(child));
  }
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

export function table(headers: string[], rows: (string | Node)[][]): HTMLTableElement {
  const head = el("tr", {}, headers.map((h) => el("th", {}, [h])));
  const body = rows.map((cells) => el("tr", {}, cells.map((c) => el("td", {}, [c]))));
  return el("table", { class: "data" }, [el("thead", {}, [head]), el("tbody", {}, body)]);
}

export function banner(kind: "error" | "success" | "info", text: string): HTMLElement {
  return el("div", { class: `banner banner-${kind}`, role: "status" }, [text]);
}

export function labeled(labelText: string, input: HTMLElement): HTMLElement {
  return el("label", { class: "field" }, [el("span", {}, [labelText]), input]);
}

export function dollars(cents: number): string {
  return `$${(cents / 100).toFixed(2)}`;
}
