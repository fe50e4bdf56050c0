"""Reference encoding of the normative road-fine management process.

The net is a state machine (one token, no concurrency) over the eleven
activities of the process. Payment and credit collection each have a single
labelled transition; invisible transitions route into them from every point
where the process allows paying or collecting:

* a created fine is either paid on the spot or sent;
* a sent fine gets its notification inserted;
* a notified fine is paid in time, receives a penalty, or is appealed at the
  prefecture (send, insert date, receive result, notify offender, then an
  optional appeal to a judge);
* a penalised fine is paid or sent for credit collection;
* after an appeal the fine is paid, sent for credit collection, or closed.

Numbers computed against this model depend on the encoding; other readings
of the textual description lead to different per-transition counters.
"""

from importlib import resources

from .net import INVISIBLE, PetriNet

CREATE_FINE = "Create Fine"
SEND_FINE = "Send Fine"
INSERT_FINE_NOTIFICATION = "Insert Fine Notification"
ADD_PENALTY = "Add penalty"
PAYMENT = "Payment"
SEND_FOR_CREDIT_COLLECTION = "Send for Credit Collection"
SEND_APPEAL = "Send Appeal to Prefecture"
INSERT_DATE_APPEAL = "Insert Date Appeal to Prefecture"
RECEIVE_RESULT_APPEAL = "Receive Result Appeal from Prefecture"
NOTIFY_RESULT_APPEAL = "Notify Result Appeal to Offender"
APPEAL_TO_JUDGE = "Appeal to Judge"

ACTIVITIES = (
    CREATE_FINE, SEND_FINE, INSERT_FINE_NOTIFICATION, ADD_PENALTY, PAYMENT,
    SEND_FOR_CREDIT_COLLECTION, SEND_APPEAL, INSERT_DATE_APPEAL, RECEIVE_RESULT_APPEAL,
    NOTIFY_RESULT_APPEAL, APPEAL_TO_JUDGE,
)

# (transition id, label, input place, output place)
_STEPS = (
    ("create_fine", CREATE_FINE, "source", "created"),
    ("send_fine", SEND_FINE, "created", "sent"),
    ("insert_fine_notification", INSERT_FINE_NOTIFICATION, "sent", "notified"),
    ("add_penalty", ADD_PENALTY, "notified", "penalized"),
    ("send_appeal", SEND_APPEAL, "notified", "appeal_sent"),
    ("insert_date_appeal", INSERT_DATE_APPEAL, "appeal_sent", "appeal_registered"),
    ("receive_result_appeal", RECEIVE_RESULT_APPEAL, "appeal_registered", "appeal_decided"),
    ("notify_result_appeal", NOTIFY_RESULT_APPEAL, "appeal_decided", "appeal_notified"),
    ("appeal_to_judge", APPEAL_TO_JUDGE, "appeal_notified", "appeal_closed"),
    ("payment", PAYMENT, "to_pay", "sink"),
    ("send_for_credit_collection", SEND_FOR_CREDIT_COLLECTION, "to_collect", "sink"),
    ("tau_skip_judge", INVISIBLE, "appeal_notified", "appeal_closed"),
    ("tau_pay_on_the_spot", INVISIBLE, "created", "to_pay"),
    ("tau_pay_in_time", INVISIBLE, "notified", "to_pay"),
    ("tau_pay_after_penalty", INVISIBLE, "penalized", "to_pay"),
    ("tau_collect_after_penalty", INVISIBLE, "penalized", "to_collect"),
    ("tau_pay_after_appeal", INVISIBLE, "appeal_closed", "to_pay"),
    ("tau_collect_after_appeal", INVISIBLE, "appeal_closed", "to_collect"),
    ("tau_close_after_appeal", INVISIBLE, "appeal_closed", "sink"),
)


def normative_rtfm_model() -> PetriNet:
    """Build the normative road-fine management net."""
    places = []
    for _, _, src, dst in _STEPS:
        for p in (src, dst):
            if p not in places:
                places.append(p)
    transitions = {tid: label for tid, label, _, _ in _STEPS}
    arcs = [(src, tid) for tid, _, src, _ in _STEPS] + [(tid, dst) for tid, _, _, dst in _STEPS]
    return PetriNet(places, transitions, arcs, {"source": 1}, {"sink": 1}, name="normative road fine management")


def normative_pnml_path():
    """Path of the shipped PNML copy of :func:`normative_rtfm_model`."""
    return resources.files("pmflow") / "data" / "normative_rtfm.pnml"


def example_fine_net() -> PetriNet:
    """Small discovered-style net over the first five activities.

    Creating a fine opens two concurrent branches: the upper one runs Send
    Fine, Insert Fine Notification and Add penalty or skips all three, the
    lower one pays or skips the payment. An invisible join closes the case.
    """
    transitions = {
        "create_fine": CREATE_FINE,
        "send_fine": SEND_FINE,
        "insert_fine_notification": INSERT_FINE_NOTIFICATION,
        "add_penalty": ADD_PENALTY,
        "payment": PAYMENT,
        "tau_skip_notification": INVISIBLE,
        "tau_skip_payment": INVISIBLE,
        "tau_join": INVISIBLE,
    }
    arcs = [
        ("source", "create_fine"), ("create_fine", "upper"), ("create_fine", "lower"),
        ("upper", "send_fine"), ("send_fine", "sent"),
        ("sent", "insert_fine_notification"), ("insert_fine_notification", "notified"),
        ("notified", "add_penalty"), ("add_penalty", "upper_done"),
        ("upper", "tau_skip_notification"), ("tau_skip_notification", "upper_done"),
        ("lower", "payment"), ("payment", "lower_done"),
        ("lower", "tau_skip_payment"), ("tau_skip_payment", "lower_done"),
        ("upper_done", "tau_join"), ("lower_done", "tau_join"), ("tau_join", "sink"),
    ]
    places = ["source", "upper", "sent", "notified", "upper_done", "lower", "lower_done", "sink"]
    return PetriNet(places, transitions, arcs, {"source": 1}, {"sink": 1}, name="example fine process")
