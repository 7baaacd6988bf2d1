"""Bundled example datasets."""

from importlib import resources

from .orders import DagOrder, FiniteDistribution, load_counts_csv, load_edge_list


def _data_path(name):
    return resources.files("partialq.data").joinpath(name)


def thks_study():
    """Outcome groups of a school-based trial, as (distribution, order).

    1600 pupils are grouped by two binary add-on interventions (CC, TV) and
    the final exam result.  Any Fail sits below any Pass; within the same
    result, a group with fewer interventions is preferred.  Masses are exact
    rationals from the published counts.
    """
    with resources.as_file(_data_path("thks_counts.csv")) as p:
        dist = load_counts_csv(p)
    with resources.as_file(_data_path("thks_edges.txt")) as p:
        labels, edges = load_edge_list(p)
    extra = [lab for lab in dist.labels if lab not in labels]
    return dist, DagOrder(labels + extra, edges)


def demo_dag():
    """An eleven-item DAG with uniform masses and a unique middle element."""
    with resources.as_file(_data_path("dag11_edges.txt")) as p:
        labels, edges = load_edge_list(p)
    dist = FiniteDistribution.from_counts(labels, [1] * len(labels))
    return dist, DagOrder(labels, edges)


def cyclic_triple():
    """Three outcomes with cyclic pairwise preferences and masses 1/2, 1/3, 1/6.

    The stated arcs are the whole relation (transitive=False), which is the
    standard example of an order whose quantile surfaces can be empty.
    """
    dist = FiniteDistribution.from_counts(["a", "b", "c"], [3, 2, 1])
    order = DagOrder(["a", "b", "c"],
                     [("a", "b"), ("b", "c"), ("c", "a")],
                     transitive=False)
    return dist, order
