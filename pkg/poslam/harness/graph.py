"""
Reduction Graph - α同値で同一視した簡約グラフの構築と解析

節点は alpha_key、辺は規則ラベルの集合を持つ。上限に達した場合は
truncated を立て、展開していない節点を残す。
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Set, Tuple

import networkx as nx

from ..syntax import Term, alpha_key
from .strategies import Reducer

logger = logging.getLogger(__name__)


@dataclass
class DiamondReport:
    """ダイヤモンド性と、その帰結 (長さの不変性・一様正規化) の検査結果"""
    peaks: int = 0
    violations: List[Tuple[Term, Term, Term]] = field(default_factory=list)
    length_violations: List[Term] = field(default_factory=list)
    uniform_violations: List[Term] = field(default_factory=list)
    skipped: int = 0
    truncated: bool = False

    @property
    def diamond(self) -> bool:
        return not self.violations

    @property
    def ok(self) -> bool:
        return self.diamond and not self.length_violations and not self.uniform_violations


@dataclass
class ConfluenceReport:
    peaks: int = 0
    violations: List[Tuple[Term, Term, Term]] = field(default_factory=list)
    normal_form_conflicts: List[Term] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.normal_form_conflicts


class ReductionGraph:
    """簡約グラフ"""

    def __init__(self, root: Term, reducer: Reducer, node_cap: int = 10000, depth_cap: int = 200):
        self.reducer = reducer
        self.node_cap = node_cap
        self.depth_cap = depth_cap
        self.graph = nx.DiGraph()
        self.root = alpha_key(root)
        self.truncated = False
        self._build(root)

    def _add_node(self, key: str, term: Term, depth: int):
        self.graph.add_node(key, term=term, depth=depth, expanded=False, normal=False)

    def _build(self, root: Term):
        """幅優先で reducts を閉包する"""
        self._add_node(self.root, root, 0)
        queue = deque([self.root])
        while queue:
            key = queue.popleft()
            data = self.graph.nodes[key]
            if data['depth'] >= self.depth_cap:
                self.truncated = True
                continue
            reducts = self.reducer.reducts(data['term'])
            data['expanded'] = True
            data['normal'] = not reducts
            for redex, reduct in reducts:
                target = alpha_key(reduct)
                if target not in self.graph:
                    if self.graph.number_of_nodes() >= self.node_cap:
                        self.truncated = True
                        continue
                    self._add_node(target, reduct, data['depth'] + 1)
                    queue.append(target)
                if self.graph.has_edge(key, target):
                    self.graph.edges[key, target]['labels'].add(redex.label)
                else:
                    self.graph.add_edge(key, target, labels={redex.label})
        if self.truncated:
            logger.info("reduction graph truncated at %d nodes", self.graph.number_of_nodes())

    # -----------------------------------------------------------------
    # 参照
    # -----------------------------------------------------------------

    def __len__(self) -> int:
        return self.graph.number_of_nodes()

    def term(self, key: str) -> Term:
        return self.graph.nodes[key]['term']

    def successors(self, key: str) -> Set[str]:
        return set(self.graph.successors(key))

    def normal_nodes(self) -> List[str]:
        return [k for k, d in self.graph.nodes(data=True) if d['normal']]

    def _cyclic_nodes(self) -> Set[str]:
        """閉路上の節点"""
        cyclic: Set[str] = set()
        for component in nx.strongly_connected_components(self.graph):
            if len(component) > 1:
                cyclic |= component
            else:
                node = next(iter(component))
                if self.graph.has_edge(node, node):
                    cyclic.add(node)
        return cyclic

    def weakly_normalizing(self) -> Optional[bool]:
        """正規形に到達できるか (打ち切りで判定できなければ None)"""
        if self.normal_nodes():
            return True
        return None if self.truncated else False

    def diverges(self) -> Optional[bool]:
        """無限簡約列があるか (閉路があれば True、打ち切りで判定できなければ None)"""
        if self._cyclic_nodes():
            return True
        return None if self.truncated else False

    def join_distance(self, a: str, b: str) -> Optional[Tuple[int, int]]:
        """a と b の共通の簡約先への最短の歩数の組"""
        from_a = nx.single_source_shortest_path_length(self.graph, a)
        from_b = nx.single_source_shortest_path_length(self.graph, b)
        common = set(from_a) & set(from_b)
        if not common:
            return None
        best = min(common, key=lambda k: (max(from_a[k], from_b[k]), from_a[k] + from_b[k]))
        return from_a[best], from_b[best]

    # -----------------------------------------------------------------
    # 検査
    # -----------------------------------------------------------------

    def _peaks(self):
        for key in self.graph.nodes:
            succ = sorted(self.successors(key))
            for i, u1 in enumerate(succ):
                for u2 in succ[i + 1:]:
                    yield key, u1, u2

    def check_diamond(self) -> DiamondReport:
        """
        一歩の山がすべて一歩ずつで合流するかを検査する

        あわせて、正規形への極大な道の長さの一致と、正規形に到達できる
        節点から閉路に到達できないこと (一様正規化) を検査する。
        """
        report = DiamondReport(truncated=self.truncated)
        for key, u1, u2 in self._peaks():
            if not (self.graph.nodes[u1]['expanded'] and self.graph.nodes[u2]['expanded']):
                report.skipped += 1
                continue
            report.peaks += 1
            if not self.successors(u1) & self.successors(u2):
                report.violations.append((self.term(key), self.term(u1), self.term(u2)))

        if not self.truncated:
            self._check_lengths(report)
        return report

    def _check_lengths(self, report: DiamondReport):
        normal = set(self.normal_nodes())
        cyclic = self._cyclic_nodes()
        reaches_normal: Set[str] = set(normal)
        reaches_cycle: Set[str] = set(cyclic)
        for node in normal:
            reaches_normal |= nx.ancestors(self.graph, node)
        for node in cyclic:
            reaches_cycle |= nx.ancestors(self.graph, node)

        for node in sorted(reaches_normal & reaches_cycle):
            report.uniform_violations.append(self.term(node))

        # 閉路に到達しない部分は DAG なので最短・最長の距離を動的計画法で求める
        acyclic = self.graph.subgraph(reaches_normal - reaches_cycle)
        shortest: Dict[str, int] = {}
        longest: Dict[str, int] = {}
        for node in reversed(list(nx.topological_sort(acyclic))):
            succ = list(acyclic.successors(node))
            if not succ:
                shortest[node] = longest[node] = 0
                continue
            shortest[node] = 1 + min(shortest[s] for s in succ)
            longest[node] = 1 + max(longest[s] for s in succ)
            if shortest[node] != longest[node]:
                report.length_violations.append(self.term(node))

    def check_confluence(self) -> ConfluenceReport:
        """山が (何歩でも) 合流するか、到達できる正規形が一つ以下か"""
        report = ConfluenceReport()
        for key, u1, u2 in self._peaks():
            report.peaks += 1
            reach1 = nx.descendants(self.graph, u1) | {u1}
            reach2 = nx.descendants(self.graph, u2) | {u2}
            if not reach1 & reach2:
                report.violations.append((self.term(key), self.term(u1), self.term(u2)))
        normal = set(self.normal_nodes())
        for key in self.graph.nodes:
            reachable = (nx.descendants(self.graph, key) | {key}) & normal
            if len(reachable) > 1:
                report.normal_form_conflicts.append(self.term(key))
        return report

    # -----------------------------------------------------------------
    # 出力
    # -----------------------------------------------------------------

    def to_dot(self, label: Callable[[Term], str] = alpha_key) -> str:
        """DOT 形式 (正規形は二重丸、辺には規則ラベル)"""
        ids = {key: f"n{i}" for i, key in enumerate(self.graph.nodes)}

        def quote(text: str) -> str:
            return '"' + text.replace('\\', '\\\\').replace('"', '\\"') + '"'

        lines = ["digraph reductions {"]
        for key, data in self.graph.nodes(data=True):
            shape = "doublecircle" if data['normal'] else "ellipse"
            style = "" if data['expanded'] or data['normal'] else ", style=dashed"
            lines.append(f"  {ids[key]} [label={quote(label(data['term']))}, shape={shape}{style}];")
        for source, target, data in self.graph.edges(data=True):
            lines.append(f"  {ids[source]} -> {ids[target]} [label={quote(','.join(sorted(data['labels'])))}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def reduction_graph(t: Term, reducer: Reducer, node_cap: int = 10000, depth_cap: int = 200) -> ReductionGraph:
    """t から到達できる簡約グラフ"""
    return ReductionGraph(t, reducer, node_cap, depth_cap)
