public class TraceSubscriptionManager {
    public void updateSubscription(Subscription subscription) {
        subscriptionStore.update(subscription);
    }
    public void approveTrace(Trace trace) {
        traceStore.approve(trace);
    }
}
