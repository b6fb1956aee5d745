from .tur import TurResult, dijkstra, is_connected_tur, route_tur, tur_e2e, tur_graph, tur_hop_metrics
