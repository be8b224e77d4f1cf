# lazydet/statistics.py
from typing import Dict, List, Sequence

import pandas as pd


class LayerStatistics:
    """Per-component verdict records, aggregated per deciding layer"""

    COLUMNS = ['component', 'size', 'verdict', 'layer', 'cached']

    def __init__(self, layers: Sequence[str]):
        self.layers = list(layers)
        self.records: List[Dict] = []

    def record(self, component: int, size: int, verdict: str, layer: str, cached: bool) -> None:
        self.records.append({
            'component': component,
            'size': size,
            'verdict': verdict,
            'layer': layer,
            'cached': cached,
        })

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.records, columns=self.COLUMNS)

    def layer_counts(self) -> Dict[str, int]:
        """Components decided per layer, every layer listed"""
        df = self.frame()
        counts = df.groupby('layer').size().reindex(self.layers, fill_value=0)
        return {layer: int(count) for layer, count in counts.items()}

    def summary(self) -> pd.DataFrame:
        """Components, states and accepting share per layer"""
        df = self.frame()
        df['accepting'] = df['verdict'] == 'accepting'
        table = df.groupby('layer').agg(
            components=('component', 'count'),
            states=('size', 'sum'),
            accepting=('accepting', 'sum'),
            cached=('cached', 'sum'),
        )
        table = table.reindex(self.layers, fill_value=0).astype(int)
        table.index.name = 'layer'
        return table

    def format_table(self) -> str:
        return self.summary().to_string()
