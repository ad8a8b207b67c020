"""
Check Report - 性質検査の結果の集計と表・グラフ出力
"""

import json
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterable, List, Optional

import pandas as pd

MAX_WITNESSES = 5


@dataclass
class CheckReport:
    """一つの性質についての検査結果"""
    property: str
    corpus: str
    instances: int = 0
    violations: int = 0
    witnesses: List[str] = field(default_factory=list)
    skipped: int = 0
    skip_limit: Optional[float] = None

    @property
    def skip_ratio(self) -> float:
        total = self.instances + self.skipped
        return self.skipped / total if total else 0.0

    @property
    def ok(self) -> bool:
        """違反がなく、skip_limit があれば打ち切りの割合がそれ未満"""
        if self.violations:
            return False
        return self.skip_limit is None or self.skip_ratio < self.skip_limit

    def add_witness(self, text: str):
        if len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append(text)

    def merge(self, other: 'CheckReport') -> 'CheckReport':
        """同じ性質の別スライスの結果を後ろに足す"""
        witnesses = (self.witnesses + other.witnesses)[:MAX_WITNESSES]
        return CheckReport(
            property=self.property,
            corpus=self.corpus,
            instances=self.instances + other.instances,
            violations=self.violations + other.violations,
            witnesses=witnesses,
            skipped=self.skipped + other.skipped,
            skip_limit=self.skip_limit,
        )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)


def reports_to_frame(reports: Iterable[CheckReport]) -> pd.DataFrame:
    """検査結果を DataFrame に"""
    rows = []
    for report in reports:
        rows.append({
            'property': report.property,
            'corpus': report.corpus,
            'instances': report.instances,
            'violations': report.violations,
            'skipped': report.skipped,
            'status': 'ok' if report.ok else 'FAIL',
        })
    return pd.DataFrame(rows, columns=['property', 'corpus', 'instances', 'violations', 'skipped', 'status'])


def render_table(reports: Iterable[CheckReport]) -> str:
    """Markdown の表 (GitHub 形式)"""
    return reports_to_frame(reports).to_markdown(index=False, tablefmt='github')


def bench_frame(rows: Iterable[Dict[str, Any]]) -> pd.DataFrame:
    return pd.DataFrame(list(rows), columns=['variant', 'm_steps', 'exp_steps', 'gc_steps', 'total_steps'])


def render_bench_table(rows: Iterable[Dict[str, Any]]) -> str:
    return bench_frame(rows).to_markdown(index=False, tablefmt='github')


def plot_bench(rows: Iterable[Dict[str, Any]], path: str, title: Optional[str] = None) -> str:
    """
    乗法ステップ数に対する指数ステップ数の折れ線グラフを PNG で保存

    Returns:
        保存したファイルパス
    """
    import matplotlib
    matplotlib.use('Agg')
    import matplotlib.pyplot as plt

    frame = bench_frame(rows)
    fig, ax = plt.subplots(figsize=(6, 4))
    for variant, group in frame.groupby('variant', sort=False):
        ax.plot(group['m_steps'], group['exp_steps'], marker='o', label=variant)
    ax.set_xlabel('multiplicative steps')
    ax.set_ylabel('exponential steps')
    ax.set_title(title or 'Omega: exponential overhead')
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path
