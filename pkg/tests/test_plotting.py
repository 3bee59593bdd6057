import numpy as np
import pytest

from infosens import plotting

PNG = b"\x89PNG\r\n\x1a\n"


class TestFigures:
    def test_convergence(self, tmp_path):
        gen = np.repeat(np.arange(5), 4)
        path = plotting.plot_convergence(gen, np.linspace(1, 0, 20), tmp_path / "c.png")
        assert path.read_bytes()[:8] == PNG

    def test_mae(self, tmp_path):
        series = {"CMI": [(3, 0.1)], "MIM": [(1, 0.3), (2, 0.2), (3, 0.15)]}
        assert plotting.plot_mae(series, tmp_path / "m.png").read_bytes()[:8] == PNG

    def test_synergy(self, tmp_path):
        m = np.full((3, 3), np.nan)
        m[0, 1], m[0, 2], m[1, 2] = 0.1, 0.0, 0.4
        assert plotting.plot_synergy(m, ["a", "b", "c"], tmp_path / "s.png").read_bytes()[:8] == PNG

    def test_feature_map(self, tmp_path):
        names = [f"s{n}_{k}" for n in (1, 2) for k in ("LEx", "LEy", "p1", "TEx", "TEy")]
        values = np.where(np.arange(10) % 3 == 0, 0.2, np.nan)
        assert plotting.plot_feature_map(names, values, tmp_path / "f.png").read_bytes()[:8] == PNG


class TestFeatureGrid:
    def test_layout(self):
        names = ["s1_LEx", "s1_p1", "s2_LEx", "s2_p1"]
        grid, cols = plotting.feature_grid(names, [1.0, 2.0, 3.0, 4.0])
        assert cols == ["LEx", "LEy", "p1", "TEx", "TEy"]
        assert grid.shape == (2, 5)
        assert grid[1, 2] == 4.0 and np.isnan(grid[0, 1])
        assert np.nansum(grid) == pytest.approx(10.0)

    def test_foreign_names(self):
        assert plotting.feature_grid(["X1", "X2"], [1.0, 2.0]) == (None, [])
