# bar chart of the write cost of every evaluated codec, normalized to FNW
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from evaluation import CostReport


class NormalizedCostChart(object):
    def __init__(self, report: CostReport, title: str = "Writing cost normalized to FNW", colour: str = "grey",
                 highlight: str = "vlc"):
        """Intialisation method for the chart.
            Accepts:
                report: Type CostReport. Must include fnw.
                title: Type string.
                colour: Type string. Bar colour.
                highlight: Type string. Codec drawn in black.
            No return values"""
        self.labels = []
        self.values = []
        for codec in report.codecs:
            normalized = report.normalized_cost(codec)
            if normalized is not None:
                self.labels.append(codec)
                self.values.append(float(normalized))
        if not self.labels:
            raise ValueError("Nothing to plot: the report has no FNW total to normalize to")
        self.title = title
        self.colour = colour
        self.highlight = highlight
        self.fig, self.ax = plt.subplots()

    def plot(self):
        colours = ["k" if label == self.highlight else self.colour for label in self.labels]
        self.ax.bar(self.labels, self.values, color=colours)
        self.ax.axhline(1.0, color="k", linewidth=0.8, linestyle="--")
        self.ax.set_ylabel("Normalized writing cost")
        self.ax.set_title(self.title)
        for x, value in enumerate(self.values):
            self.ax.text(x, value, f"{value:.3f}", ha="center", va="bottom", fontsize=8)
        return self.fig, self.ax

    def save(self, filename: str):
        self.plot()
        self.fig.savefig(filename)
        plt.close(self.fig)
