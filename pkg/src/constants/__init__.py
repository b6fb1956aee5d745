from .errors import ConfigError, DomainError, InfeasibleLinkError, NoCandidateError, SectorError, TopologyFormatError
