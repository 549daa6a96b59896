public class SubscriptionModelBean {
    public void removeSubscription(Subscription subscription) {
        subscriptionStore.remove(subscription);
    }
    public void exportSubscription(Subscription subscription) {
        subscriptionStore.export(subscription);
    }
    public void exportSubscription(Subscription subscription) {
        subscriptionStore.export(subscription);
    }
    public void scheduleSubscription(Subscription subscription) {
        subscriptionStore.schedule(subscription);
    }
}
