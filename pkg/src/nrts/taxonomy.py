"""Action taxonomy: a rooted tree of action concepts.

The taxonomy is the semantic substrate for action substitution costs. The
file format is a JSON object with a single root and a child -> parent edge
map::

    {"root": "resuscitation",
     "nodes": {"airway": "resuscitation", "intubate": "airway", ...}}

A document with only a ``root`` key is a valid single-node taxonomy.
"""

from __future__ import annotations

import json


class TaxonomyError(ValueError):
    """Invalid taxonomy document. ``offending_id`` names the node at fault."""

    def __init__(self, message: str, offending_id: str):
        super().__init__(message)
        self.offending_id = offending_id


class ActionTaxonomy:
    """Immutable rooted tree of action identifiers.

    Depths are precomputed: depth(root) = 0, depth(child) = depth(parent) + 1.
    """

    def __init__(self, root: str, parents: dict[str, str]):
        if not isinstance(root, str) or not root:
            raise TaxonomyError("root must be a non-empty string", str(root))
        for child in parents:
            if child == root:
                raise TaxonomyError(f"duplicate id {child!r}", child)
        self._root = root
        self._parents = dict(parents)
        self._children: dict[str, list[str]] = {root: []}
        for child in parents:
            self._children.setdefault(child, [])
        for child, parent in parents.items():
            if parent in self._children:
                self._children[parent].append(child)
        self._depths = self._resolve_depths()

    def _resolve_depths(self) -> dict[str, int]:
        known = set(self._parents) | {self._root}
        depths: dict[str, int] = {self._root: 0}
        for start in self._parents:
            if start in depths:
                continue
            chain = []
            node = start
            while node not in depths:
                if node in chain:
                    raise TaxonomyError(f"cycle through id {start!r}", start)
                chain.append(node)
                parent = self._parents.get(node)
                if parent is None or parent not in known:
                    raise TaxonomyError(
                        f"dangling parent {parent!r} of node {node!r}",
                        str(parent),
                    )
                node = parent
            base = depths[node]
            for offset, member in enumerate(reversed(chain), start=1):
                depths[member] = base + offset
        return depths

    @property
    def root(self) -> str:
        return self._root

    @property
    def nodes(self) -> frozenset[str]:
        return frozenset(self._depths)

    def __contains__(self, action_id: str) -> bool:
        return action_id in self._depths

    def __len__(self) -> int:
        return len(self._depths)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ActionTaxonomy):
            return NotImplemented
        return self._root == other._root and self._parents == other._parents

    def depth(self, action_id: str) -> int:
        self._require(action_id)
        return self._depths[action_id]

    def parent_of(self, action_id: str) -> str | None:
        self._require(action_id)
        return self._parents.get(action_id)

    def children_of(self, action_id: str) -> tuple[str, ...]:
        self._require(action_id)
        return tuple(self._children[action_id])

    def siblings_of(self, action_id: str) -> tuple[str, ...]:
        """Other nodes sharing this node's parent; empty for the root."""
        parent = self.parent_of(action_id)
        if parent is None:
            return ()
        return tuple(c for c in self._children[parent] if c != action_id)

    def ancestors_of(self, action_id: str) -> tuple[str, ...]:
        """Chain from the node itself up to the root, inclusive."""
        self._require(action_id)
        chain = [action_id]
        while (parent := self._parents.get(chain[-1])) is not None:
            chain.append(parent)
        return tuple(chain)

    def lca(self, a: str, b: str) -> str:
        """Deepest common ancestor of two nodes."""
        ancestors_a = set(self.ancestors_of(a))
        for node in self.ancestors_of(b):
            if node in ancestors_a:
                return node
        raise TaxonomyError(f"no common ancestor of {a!r} and {b!r}", a)

    def _require(self, action_id: str) -> None:
        if action_id not in self._depths:
            raise TaxonomyError(f"unresolved action id {action_id!r}", action_id)

    def to_document(self) -> dict:
        doc: dict = {"root": self._root}
        if self._parents:
            doc["nodes"] = {c: self._parents[c] for c in sorted(self._parents)}
        return doc

    def serialize(self) -> str:
        return json.dumps(self.to_document(), indent=2, ensure_ascii=False) + "\n"


def _pairs_hook(pairs: list[tuple[str, object]]) -> dict:
    seen = set()
    for key, _ in pairs:
        if key in seen:
            raise TaxonomyError(f"duplicate id {key!r}", key)
        seen.add(key)
    return dict(pairs)


def taxonomy_from_document(doc: dict) -> ActionTaxonomy:
    if not isinstance(doc, dict):
        raise TaxonomyError("taxonomy document must be a JSON object", "")
    unknown = set(doc) - {"root", "nodes"}
    if unknown:
        key = sorted(unknown)[0]
        raise TaxonomyError(f"unknown taxonomy key {key!r}", key)
    if "root" not in doc:
        raise TaxonomyError("taxonomy document missing 'root'", "root")
    nodes = doc.get("nodes", {})
    if not isinstance(nodes, dict):
        raise TaxonomyError("'nodes' must map child id to parent id", "nodes")
    parents: dict[str, str] = {}
    for child, parent in nodes.items():
        if not isinstance(child, str) or not child:
            raise TaxonomyError(f"invalid node id {child!r}", str(child))
        if parent is None:
            raise TaxonomyError(
                f"multiple roots: node {child!r} declares no parent", child
            )
        if not isinstance(parent, str) or not parent:
            raise TaxonomyError(f"invalid parent {parent!r} of {child!r}", child)
        parents[child] = parent
    return ActionTaxonomy(doc["root"], parents)


def parse_taxonomy(document: str) -> ActionTaxonomy:
    """Parse and validate a taxonomy document (JSON text, UTF-8)."""
    try:
        doc = json.loads(document, object_pairs_hook=_pairs_hook)
    except TaxonomyError:
        raise
    except json.JSONDecodeError as exc:
        raise TaxonomyError(f"malformed taxonomy document: {exc}", "") from exc
    return taxonomy_from_document(doc)
