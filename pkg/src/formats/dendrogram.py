"""
Dendrogram Serialization

The dendrogram document (JSON schema "hcsvd-dendrogram/1"), Newick export and
parsing, and the linkage table written by `--format csv`.

JSON layout:
    {
      "schema": "hcsvd-dendrogram/1",
      "labels": [...],                  # variable i has leaf id -(i+1)
      "height_mode": "split" | "reliability" | "diameter",
      "merges": [{"id": 1, "left": -1, "right": -2, "height": 0.3, "size": 2}, ...],
      "diagnostics": {"ultrametric_violations": 0, "monotone": true, ...},
      "metadata": {...}
    }
Internal nodes are numbered 1..p-1 in merge order (bottom-up); the last merge
is the root.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Optional, Tuple

import pandas as pd
from skbio import TreeNode
from skbio.io import NewickFormatError

from ..exceptions import InputFormatError
from ..models.tree import SplitTree

logger = logging.getLogger(__name__)

SCHEMA = "hcsvd-dendrogram/1"
LINKAGE_COLUMNS = ['left', 'right', 'height', 'size']


@dataclass
class Merge:
    left: int
    right: int
    height: float
    size: int

    def to_dict(self, node_id: int) -> Dict[str, Any]:
        return {'id': node_id, 'left': self.left, 'right': self.right, 'height': self.height, 'size': self.size}


@dataclass
class DendrogramDocument:
    """Serializable dendrogram."""
    labels: List[str]
    merges: List[Merge]
    height_mode: str = 'split'
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    metadata: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_tree(cls, tree: SplitTree, metadata: Optional[Dict[str, Any]] = None) -> 'DendrogramDocument':
        return cls(
            labels=list(tree.labels),
            merges=[Merge(a, b, float(h), int(s)) for a, b, h, s in tree.merges()],
            height_mode=tree.height_mode.value,
            diagnostics=dict(tree.diagnostics),
            metadata=dict(metadata or {}),
        )

    @property
    def p(self) -> int:
        return len(self.labels)

    def validate(self) -> None:
        """Raise InputFormatError unless the merges form a binary tree over the leaves."""
        p = self.p
        if len(self.merges) != max(p - 1, 0):
            raise InputFormatError(f"Expected {p - 1} merges for {p} leaves, got {len(self.merges)}")
        available = {-(i + 1): 1 for i in range(p)}
        for node_id, merge in enumerate(self.merges, start=1):
            for child in (merge.left, merge.right):
                if child not in available:
                    raise InputFormatError(f"Merge {node_id} uses unknown or consumed node {child}")
            size = available.pop(merge.left) + available.pop(merge.right)
            if size != merge.size:
                raise InputFormatError(f"Merge {node_id} has size {merge.size}, expected {size}")
            if not math.isfinite(merge.height):
                raise InputFormatError(f"Merge {node_id} has a non-finite height")
            available[node_id] = size

    def leaf_sets(self) -> Dict[FrozenSet[str], float]:
        """Height of every internal node keyed by the labels below it."""
        below: Dict[int, FrozenSet[str]] = {-(i + 1): frozenset([label]) for i, label in enumerate(self.labels)}
        out = {}
        for node_id, merge in enumerate(self.merges, start=1):
            below[node_id] = below[merge.left] | below[merge.right]
            out[below[node_id]] = merge.height
        return out

    def to_dict(self) -> Dict[str, Any]:
        return {
            'schema': SCHEMA,
            'labels': list(self.labels),
            'height_mode': self.height_mode,
            'merges': [m.to_dict(i) for i, m in enumerate(self.merges, start=1)],
            'diagnostics': dict(self.diagnostics),
            'metadata': dict(self.metadata),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + '\n'

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'DendrogramDocument':
        if data.get('schema') != SCHEMA:
            raise InputFormatError(f"Unsupported dendrogram schema {data.get('schema')!r}")
        try:
            merges = sorted(data['merges'], key=lambda m: m['id'])
            doc = cls(
                labels=[str(label) for label in data['labels']],
                merges=[Merge(int(m['left']), int(m['right']), float(m['height']), int(m['size'])) for m in merges],
                height_mode=data.get('height_mode', 'split'),
                diagnostics=dict(data.get('diagnostics', {})),
                metadata=dict(data.get('metadata', {})),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InputFormatError(f"Malformed dendrogram document: {e}") from None
        doc.validate()
        return doc

    @classmethod
    def from_json(cls, text: str) -> 'DendrogramDocument':
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputFormatError(f"Invalid dendrogram JSON: {e}") from None
        return cls.from_dict(data)


def linkage_table(tree: SplitTree) -> pd.DataFrame:
    """SciPy linkage matrix of the tree (leaves 0..p-1, merge i creates cluster p+i) as a table."""
    return pd.DataFrame(tree.to_linkage(), columns=LINKAGE_COLUMNS)


# ---------------------------------------------------------------------------
# Newick
# ---------------------------------------------------------------------------

def to_tree_node(doc: DendrogramDocument) -> TreeNode:
    """
    scikit-bio tree with branch lengths parent height - child height.

    Negative branch lengths (non-monotone heights) are set to 0 and logged.
    """
    nodes = {-(i + 1): TreeNode(name=label) for i, label in enumerate(doc.labels)}
    height = {node: 0.0 for node in nodes}
    clamped = 0
    for node_id, merge in enumerate(doc.merges, start=1):
        parent = TreeNode()
        for child in (merge.left, merge.right):
            length = merge.height - height[child]
            if length < 0:
                clamped += 1
                length = 0.0
            nodes[child].length = length
            parent.append(nodes.pop(child))
        nodes[node_id] = parent
        height[node_id] = merge.height
    if clamped:
        logger.warning("Clamped %d negative branch lengths to 0 in Newick output (heights not monotone)", clamped)
    return nodes[len(doc.merges)] if doc.merges else nodes[-1]


def to_newick(doc: DendrogramDocument) -> str:
    """Newick string of the dendrogram (see to_tree_node for branch lengths)."""
    return str(to_tree_node(doc)).strip()


def parse_newick(text: str) -> TreeNode:
    """
    Parse a Newick string. Underscores in labels are kept as written.

    Raises:
        InputFormatError: on malformed input
    """
    text = text.strip()
    if not text.endswith(';'):
        raise InputFormatError("Newick string must end with ';'")
    try:
        return TreeNode.read([text], format='newick', convert_underscores=False)
    except (NewickFormatError, ValueError) as e:
        raise InputFormatError(f"Malformed Newick string: {e}") from None


def document_from_newick(text: str, height_mode: str = 'split') -> DendrogramDocument:
    """
    Rebuild a dendrogram document from Newick, with heights recovered bottom-up
    (leaf height 0, parent height = child height + branch length).

    Leaf order follows first appearance in the string.

    Raises:
        InputFormatError: if the tree is not binary or a leaf is unnamed
    """
    root = parse_newick(text)
    labels: List[str] = []
    merges: List[Merge] = []

    def visit(node: TreeNode) -> Tuple[int, float, int]:
        if node.is_tip():
            if not node.name:
                raise InputFormatError("Unnamed leaf in Newick string")
            labels.append(node.name)
            return -len(labels), 0.0, 1
        if len(node.children) != 2:
            raise InputFormatError(f"Newick node with {len(node.children)} children; only binary trees are supported")
        left, right = node.children
        left_id, left_height, left_size = visit(left)
        right_id, _, right_size = visit(right)
        height = left_height + (left.length or 0.0)
        merges.append(Merge(left_id, right_id, height, left_size + right_size))
        return len(merges), height, left_size + right_size

    visit(root)
    doc = DendrogramDocument(labels, merges, height_mode)
    doc.validate()
    return doc
