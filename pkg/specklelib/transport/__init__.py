from .packet import (Event, PhotonPacket, PacketBatch, launch_packet, launch_batch, step_packet, step_batch,
                     update_correlation_weight, sample_free_path)
from .tally import BoundaryTally, merge_tallies, save_tally, load_tally
from .transport_runner import TransportRunner, InvalidSceneError, run_transport, default_workers
