"""Tests for the per-layer statistics table."""
from __future__ import annotations

from lazydet.statistics import LayerStatistics


def _filled():
    statistics = LayerStatistics(['subset', 'breakpoint', 'rabin'])
    statistics.record(0, 3, 'accepting', 'breakpoint', False)
    statistics.record(1, 1, 'rejecting', 'subset', False)
    statistics.record(2, 4, 'accepting', 'breakpoint', True)
    return statistics


class TestLayerStatistics:
    def test_counts_list_every_layer(self):
        assert _filled().layer_counts() == {'subset': 1, 'breakpoint': 2, 'rabin': 0}

    def test_empty(self):
        assert LayerStatistics(['subset']).layer_counts() == {'subset': 0}

    def test_summary(self):
        table = _filled().summary()
        assert list(table.index) == ['subset', 'breakpoint', 'rabin']
        assert table.loc['breakpoint', 'states'] == 7
        assert table.loc['breakpoint', 'accepting'] == 2
        assert table.loc['breakpoint', 'cached'] == 1
        assert table.loc['rabin', 'components'] == 0

    def test_frame_columns(self):
        assert list(_filled().frame().columns) == LayerStatistics.COLUMNS

    def test_format_table(self):
        text = _filled().format_table()
        assert 'breakpoint' in text
        assert 'components' in text
