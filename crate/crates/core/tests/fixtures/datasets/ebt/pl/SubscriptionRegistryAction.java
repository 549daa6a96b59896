public class SubscriptionRegistryAction {
    public void exportRegistry(Registry registry) {
        registryStore.export(registry);
    }
    public void listSubscription(Subscription subscription) {
        subscriptionStore.list(subscription);
    }
    public void notifySubscription(Subscription subscription) {
        subscriptionStore.notify(subscription);
    }
    public void editSubscription(Subscription subscription) {
        subscriptionStore.edit(subscription);
    }
}
